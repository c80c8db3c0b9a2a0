//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Training loop, model selection on validation AUC, repeated runs and
// ablations.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tridti/archive.hpp"
#include "tridti/checkpoint.hpp"
#include "tridti/metrics.hpp"
#include "tridti/model.hpp"
#include "tridti/splits.hpp"

namespace tridti {

// Everything the model consumes for one split: vocabularies trained on the
// drugs/proteins of the training samples, tokenized entities and the
// sample list as index pairs.
struct TrainingData {
  Vocabulary drug_vocab, protein_vocab;
  std::vector<PreparedDrug> drugs;
  std::vector<PreparedProtein> proteins;
  std::vector<PairRef> pairs;
};

TrainingData prepare_training_data(const Dataset &data,
                                   const DatasetSplit &split,
                                   const ModelConfig &config);

// Prepared entities for an already trained model (vocabularies fixed).
TrainingData prepare_with_vocab(const Dataset &data,
                                const Vocabulary &drug_vocab,
                                const Vocabulary &protein_vocab,
                                const ModelConfig &config);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  Metrics train;
  Metrics val;
};

struct RunReport {
  int run = 0;
  std::uint64_t seed = 0;
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;  // 0 = untrained parameters
  Metrics train;       // selected parameters
  Metrics val;
  Metrics test;
  std::vector<std::string> warnings;

  friend bool operator==(const RunReport &a, const RunReport &b);
};

struct TrainOptions {
  // Evaluate train-set metrics after every epoch (one extra inference pass).
  bool train_metrics_each_epoch = true;
  // Called after each epoch; for progress output.
  std::function<void(int run, const EpochRecord &)> on_epoch;
};

// One training run on one split. `out`, when given, receives the model with
// the best-validation parameters restored.
RunReport train_run(const ModelConfig &config, const Dataset &data,
                    const DatasetSplit &split, Variant variant,
                    const TrainOptions &options = {},
                    TrainedModel *out = nullptr, int run_index = 0);

// Evaluates a trained model on the index lists of its split.
Metrics evaluate_indices(const TrainedModel &model, const TrainingData &prep,
                         const std::vector<int> &indices, double threshold,
                         std::vector<std::string> *warnings = nullptr);

struct TrainReport {
  std::string dataset;
  std::string variant;
  std::vector<RunReport> runs;
  MeanStd auc, aupr, precision;

  void summarize();
  std::string to_json() const;
};

// Splits for the dataset: the fixed partition when the archive has one
// (gpcr scheme), otherwise `scheme` with config.runs repeats.
std::vector<DatasetSplit> splits_for(const Dataset &data, SplitScheme scheme,
                                     const ModelConfig &config);

// config.runs runs; run r uses split r mod |splits| and seed config.seed + r.
// The checkpoint of the run with the best validation AUC goes to `best`.
TrainReport train_runs(const ModelConfig &config, const Dataset &data,
                       const std::vector<DatasetSplit> &splits,
                       Variant variant, const std::string &dataset_name,
                       const TrainOptions &options = {},
                       TrainedModel *best = nullptr);

std::vector<TrainReport> run_ablation(const ModelConfig &config,
                                      const Dataset &data,
                                      const std::vector<DatasetSplit> &splits,
                                      const std::vector<Variant> &variants,
                                      const std::string &dataset_name,
                                      const TrainOptions &options = {});

// Aligned text table with Dataset/Variant/AUC/AUPR/Precision columns as
// mean ± std.
std::string report_table(const std::vector<TrainReport> &reports);
std::string reports_json(const std::vector<TrainReport> &reports);

// Balanced subsample of `n` samples (n/2 per class), seeded.
Dataset balanced_subsample(const Dataset &data, int n, std::uint64_t seed);

} // namespace tridti
