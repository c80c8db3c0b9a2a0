//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Frequency-driven subword segmentation of SMILES and protein strings.
//
// Training starts from single characters and repeatedly merges the most
// frequent adjacent token pair (ties: lexicographically smaller pair). At
// tokenize time the learned merges are applied in training order.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tridti/autograd.hpp"

namespace tridti {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

using MergeRule = std::pair<std::string, std::string>;

class Vocabulary {
public:
  // Specials only.
  Vocabulary();

  // Specials, then the given characters, then one token per merge.
  Vocabulary(const std::vector<char> &alphabet,
             const std::vector<MergeRule> &merges);

  int size() const { return static_cast<int>(tokens_.size()); }
  // Number of tokens excluding PAD and UNK.
  int regular_size() const { return size() - 2; }

  // UNK for unknown tokens.
  int id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string &token(int id) const;

  const std::vector<MergeRule> &merges() const { return merges_; }
  // Rank of the merge (left, right) or -1.
  int merge_rank(int left, int right) const;
  // Id of the token produced by merge `rank`.
  int merge_result(int rank) const { return merge_ids_[rank]; }

  // {"tokens": {token: id, ...}, "merges": [[left, right], ...]}
  std::string to_json() const;
  static Vocabulary from_json(std::string_view text);
  void save(const std::filesystem::path &path) const;
  static Vocabulary load(const std::filesystem::path &path);

  friend bool operator==(const Vocabulary &a, const Vocabulary &b) {
    return a.tokens_ == b.tokens_ && a.merges_ == b.merges_;
  }

private:
  int add_token(const std::string &token);
  void add_merge(const MergeRule &rule);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  std::vector<MergeRule> merges_;
  std::vector<int> merge_ids_;
  std::unordered_map<std::uint64_t, int> merge_rank_;
};

// Merging stops once the vocabulary holds `target_size` regular tokens or
// the best pair occurs fewer than `min_pair_freq` times.
Vocabulary train_vocab(const std::vector<std::string> &corpus, int target_size,
                       int min_pair_freq);

struct TokenSequence {
  std::vector<int> ids;

  int length() const { return static_cast<int>(ids.size()); }
};

// Unpadded ids, truncated to max_len.
TokenSequence tokenize(std::string_view sequence, const Vocabulary &vocab,
                       int max_len);

// Concatenated token strings; UNK renders as kUnkToken, PAD as nothing.
std::string detokenize(const TokenSequence &tokens, const Vocabulary &vocab);

// Row i = content[id_i] + position[i].
Matrix embed_tokens(const TokenSequence &tokens, const Matrix &content,
                    const Matrix &position);

} // namespace tridti
