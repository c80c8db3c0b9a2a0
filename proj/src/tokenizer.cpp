//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "tridti/error.hpp"
#include "tridti/ingest.hpp"

namespace tridti {
namespace {

std::uint64_t pair_key(int left, int right) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left)) << 32)
         | static_cast<std::uint32_t>(right);
}

} // namespace

Vocabulary::Vocabulary() {
  add_token(std::string(kPadToken));
  add_token(std::string(kUnkToken));
}

Vocabulary::Vocabulary(const std::vector<char> &alphabet,
                       const std::vector<MergeRule> &merges)
    : Vocabulary() {
  std::vector<char> chars = alphabet;
  std::sort(chars.begin(), chars.end());
  chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
  for (char c : chars)
    add_token(std::string(1, c));
  for (const MergeRule &m : merges)
    add_merge(m);
}

int Vocabulary::add_token(const std::string &token) {
  auto [it, inserted] = index_.emplace(token, size());
  if (!inserted)
    throw ValueError("duplicate vocabulary token '" + token + "'");
  tokens_.push_back(token);
  return it->second;
}

void Vocabulary::add_merge(const MergeRule &rule) {
  auto l = index_.find(rule.first);
  auto r = index_.find(rule.second);
  if (l == index_.end() || r == index_.end())
    throw ValueError("merge (" + rule.first + ", " + rule.second +
                     ") uses a token missing from the vocabulary");
  const std::string merged = rule.first + rule.second;
  // A merged string may already exist when two different splits produce it.
  auto existing = index_.find(merged);
  const int id = existing != index_.end() ? existing->second : add_token(merged);
  if (!merge_rank_.emplace(pair_key(l->second, r->second),
                           static_cast<int>(merges_.size()))
           .second)
    throw ValueError("duplicate merge (" + rule.first + ", " + rule.second +
                     ")");
  merges_.push_back(rule);
  merge_ids_.push_back(id);
}

int Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) != 0;
}

const std::string &Vocabulary::token(int id) const {
  if (id < 0 || id >= size())
    throw BoundsError("token id " + std::to_string(id) +
                      " outside vocabulary of size " + std::to_string(size()));
  return tokens_[id];
}

int Vocabulary::merge_rank(int left, int right) const {
  auto it = merge_rank_.find(pair_key(left, right));
  return it == merge_rank_.end() ? -1 : it->second;
}

std::string Vocabulary::to_json() const {
  nlohmann::ordered_json doc;
  doc["tokens"] = nlohmann::ordered_json::object();
  for (int i = 0; i < size(); ++i)
    doc["tokens"][tokens_[i]] = i;
  doc["merges"] = nlohmann::ordered_json::array();
  for (const MergeRule &m : merges_)
    doc["merges"].push_back({m.first, m.second});
  return doc.dump();
}

Vocabulary Vocabulary::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("vocabulary: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tokens") || !doc["tokens"].is_object())
    throw ParseError("vocabulary: missing \"tokens\" object");

  std::vector<std::string> by_id(doc["tokens"].size());
  std::vector<bool> seen(by_id.size(), false);
  for (const auto &[tok, idv] : doc["tokens"].items()) {
    if (!idv.is_number_integer())
      throw ParseError("vocabulary: non-integer id for '" + tok + "'");
    const long id = idv.get<long>();
    if (id < 0 || id >= static_cast<long>(by_id.size()) || seen[id])
      throw ParseError("vocabulary: ids are not dense from 0");
    by_id[id] = tok;
    seen[id] = true;
  }
  if (by_id.size() < 2 || by_id[kPadId] != kPadToken
      || by_id[kUnkId] != kUnkToken)
    throw ParseError("vocabulary: ids 0 and 1 must be <pad> and <unk>");

  Vocabulary v;
  std::vector<MergeRule> merges;
  if (doc.contains("merges"))
    for (const auto &m : doc["merges"]) {
      if (!m.is_array() || m.size() != 2 || !m[0].is_string()
          || !m[1].is_string())
        throw ParseError("vocabulary: merges must be [left, right] pairs");
      merges.emplace_back(m[0].get<std::string>(), m[1].get<std::string>());
    }

  // Rebuild in id order so merge results keep their stored ids.
  std::set<std::string> merged_strings;
  for (const MergeRule &m : merges)
    merged_strings.insert(m.first + m.second);
  std::size_t next_merge = 0;
  for (std::size_t id = 2; id < by_id.size(); ++id) {
    const std::string &tok = by_id[id];
    if (tok.size() == 1 && !merged_strings.count(tok)) {
      v.add_token(tok);
      continue;
    }
    // Apply merges until this token exists.
    while (next_merge < merges.size() && !v.contains(tok))
      v.add_merge(merges[next_merge++]);
    if (!v.contains(tok) || v.id(tok) != static_cast<int>(id))
      throw ParseError("vocabulary: token '" + tok +
                       "' is not produced by the merge list in id order");
  }
  while (next_merge < merges.size())
    v.add_merge(merges[next_merge++]);
  if (v.size() != static_cast<int>(by_id.size()))
    throw ParseError("vocabulary: merges produce tokens missing from "
                     "\"tokens\"");
  return v;
}

void Vocabulary::save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValueError("cannot write " + path.string());
  out << to_json() << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path &path) {
  return from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Training

namespace {

// Symbols of all words in one array with doubly linked neighbors; merges
// splice nodes out. Pair statistics are kept incrementally.
class PairMerger {
public:
  PairMerger(const std::map<std::string, long> &words,
             const std::vector<std::string> &token_text,
             const std::unordered_map<std::string, int> &char_ids)
      : text_(token_text) {
    for (const auto &[word, count] : words) {
      const int first = static_cast<int>(sym_.size());
      for (std::size_t k = 0; k < word.size(); ++k) {
        sym_.push_back(char_ids.at(std::string(1, word[k])));
        prev_.push_back(k == 0 ? -1 : static_cast<int>(sym_.size()) - 2);
        next_.push_back(k + 1 == word.size() ? -1
                                             : static_cast<int>(sym_.size()));
        weight_.push_back(count);
      }
      for (int p = first; p + 1 < static_cast<int>(sym_.size()); ++p)
        add(p, 1);
    }
  }

  // Best pair by (count desc, left text asc, right text asc).
  bool best(int &left, int &right, long &count) const {
    if (queue_.empty())
      return false;
    const auto &top = *queue_.begin();
    count = -std::get<0>(top);
    left = std::get<3>(top);
    right = std::get<4>(top);
    return count > 0;
  }

  void merge(int left, int right, int merged) {
    auto it = positions_.find(pair_key(left, right));
    if (it == positions_.end())
      return;
    std::vector<int> where = std::move(it->second);
    positions_.erase(it);
    std::sort(where.begin(), where.end());
    where.erase(std::unique(where.begin(), where.end()), where.end());
    for (int p : where) {
      if (sym_[p] != left || next_[p] < 0 || sym_[next_[p]] != right)
        continue;
      const int q = next_[p];
      if (prev_[p] >= 0)
        add(prev_[p], -1);
      add(p, -1);
      if (next_[q] >= 0)
        add(q, -1);
      sym_[p] = merged;
      sym_[q] = -1;
      next_[p] = next_[q];
      if (next_[q] >= 0)
        prev_[next_[q]] = p;
      if (prev_[p] >= 0)
        add(prev_[p], 1);
      if (next_[p] >= 0)
        add(p, 1);
    }
  }

  std::vector<std::string> &text() { return text_; }

private:
  using Entry = std::tuple<long, std::string, std::string, int, int>;

  // Adjusts the count of the pair starting at node p by +/- its weight.
  void add(int p, int sign) {
    const int l = sym_[p], r = sym_[next_[p]];
    const std::uint64_t key = pair_key(l, r);
    long &c = counts_[key];
    if (c > 0)
      queue_.erase(Entry{-c, text_[l], text_[r], l, r});
    c += sign * weight_[p];
    if (c > 0)
      queue_.insert(Entry{-c, text_[l], text_[r], l, r});
    if (sign > 0)
      positions_[key].push_back(p);
  }

  std::vector<std::string> text_;
  std::vector<int> sym_, prev_, next_;
  std::vector<long> weight_;
  std::unordered_map<std::uint64_t, long> counts_;
  std::unordered_map<std::uint64_t, std::vector<int>> positions_;
  std::set<Entry> queue_;
};

} // namespace

Vocabulary train_vocab(const std::vector<std::string> &corpus, int target_size,
                       int min_pair_freq) {
  if (corpus.empty())
    throw ValueError("train_vocab: corpus is empty");
  std::map<std::string, long> words;
  std::set<char> chars;
  for (const std::string &s : corpus) {
    if (s.empty())
      continue;
    words[s] += 1;
    chars.insert(s.begin(), s.end());
  }
  if (words.empty())
    throw ValueError("train_vocab: corpus holds only empty strings");

  const std::vector<char> alphabet(chars.begin(), chars.end());
  Vocabulary vocab(alphabet, {});
  std::vector<std::string> text;
  std::unordered_map<std::string, int> char_ids;
  for (int i = 0; i < vocab.size(); ++i)
    text.push_back(vocab.token(i));
  for (char c : alphabet)
    char_ids.emplace(std::string(1, c), vocab.id(std::string(1, c)));

  PairMerger merger(words, text, char_ids);
  std::vector<MergeRule> merges;
  int regular = vocab.regular_size();
  std::set<std::string> known(text.begin(), text.end());
  while (regular < target_size) {
    int l = 0, r = 0;
    long count = 0;
    if (!merger.best(l, r, count) || count < min_pair_freq)
      break;
    auto &tt = merger.text();
    const std::string merged = tt[l] + tt[r];
    merges.emplace_back(tt[l], tt[r]);
    int merged_id = -1;
    if (known.insert(merged).second) {
      merged_id = static_cast<int>(tt.size());
      tt.push_back(merged);
      ++regular;
    } else {
      merged_id = static_cast<int>(
          std::find(tt.begin(), tt.end(), merged) - tt.begin());
    }
    merger.merge(l, r, merged_id);
  }
  return Vocabulary(alphabet, merges);
}

// ---------------------------------------------------------------------------
// Encoding

TokenSequence tokenize(std::string_view sequence, const Vocabulary &vocab,
                       int max_len) {
  if (sequence.empty())
    throw ValueError("tokenize: empty sequence");
  if (max_len < 1)
    throw ValueError("tokenize: max_len must be positive");
  std::vector<int> ids;
  ids.reserve(sequence.size());
  for (char c : sequence)
    ids.push_back(vocab.id(std::string_view(&c, 1)));

  // Lowest-rank pair first; equivalent to applying the rules one after
  // another since a merge result never feeds an earlier rule.
  while (ids.size() > 1) {
    int best = -1;
    for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
      const int rank = vocab.merge_rank(ids[k], ids[k + 1]);
      if (rank >= 0 && (best < 0 || rank < best))
        best = rank;
    }
    if (best < 0)
      break;
    const auto &rule = vocab.merges()[best];
    const int l = vocab.id(rule.first), r = vocab.id(rule.second);
    const int merged = vocab.merge_result(best);
    std::vector<int> out;
    out.reserve(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (k + 1 < ids.size() && ids[k] == l && ids[k + 1] == r) {
        out.push_back(merged);
        ++k;
      } else {
        out.push_back(ids[k]);
      }
    }
    ids = std::move(out);
  }
  if (static_cast<int>(ids.size()) > max_len)
    ids.resize(max_len);
  return {std::move(ids)};
}

std::string detokenize(const TokenSequence &tokens, const Vocabulary &vocab) {
  std::string out;
  for (int id : tokens.ids)
    if (id != kPadId)
      out += vocab.token(id);
  return out;
}

Matrix embed_tokens(const TokenSequence &tokens, const Matrix &content,
                    const Matrix &position) {
  if (content.cols() != position.cols())
    throw DimensionError("embed_tokens: content and position widths differ");
  if (tokens.length() > position.rows())
    throw BoundsError("embed_tokens: sequence longer than the position table");
  Matrix out(tokens.length(), content.cols());
  for (int i = 0; i < tokens.length(); ++i) {
    const int id = tokens.ids[i];
    if (id < 0 || id >= content.rows())
      throw BoundsError("embed_tokens: token id " + std::to_string(id) +
                        " outside the content table");
    out.row(i) = content.row(id) + position.row(i);
  }
  return out;
}

} // namespace tridti
