//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Single-file checkpoint: config, ablation variant, both vocabularies, the
// data split, every parameter tensor (raw doubles) and the training RNG
// state.

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "tridti/model.hpp"
#include "tridti/splits.hpp"
#include "tridti/tokenizer.hpp"

namespace tridti {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TrainedModel {
  ModelConfig config;
  Variant variant = Variant::kAll;
  Vocabulary drug_vocab, protein_vocab;
  DatasetSplit split;
  std::string rng_state;
  std::unique_ptr<TriModel> model;

  // Fresh model built from config and vocabulary sizes.
  void build();
};

std::string serialize_checkpoint(const TrainedModel &m);
TrainedModel deserialize_checkpoint(std::string bytes);
void save_checkpoint(const TrainedModel &m, const std::filesystem::path &path);
TrainedModel load_checkpoint(const std::filesystem::path &path);

} // namespace tridti
