//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Post-training analysis: candidate ranking, cross-modal similarity of the
// embeddings and hyperparameter sweeps.

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "tridti/checkpoint.hpp"
#include "tridti/trainer.hpp"

namespace tridti {

struct RankedEntry {
  int rank = 0;
  std::string id;
  double score = 0.0;
};

// Scores (drug, candidate) for every candidate and returns the top k,
// descending by score with ties broken by id ascending. An empty candidate
// list means every protein. Unknown ids raise UsageError.
std::vector<RankedEntry> rank_targets(const TrainedModel &model,
                                      const TrainingData &prep,
                                      const std::string &drug_id,
                                      std::vector<std::string> candidates,
                                      int k);
// The inverse direction: candidate drugs for one protein.
std::vector<RankedEntry> rank_drugs(const TrainedModel &model,
                                    const TrainingData &prep,
                                    const std::string &protein_id,
                                    std::vector<std::string> candidates,
                                    int k);

std::string ranking_csv(const std::vector<RankedEntry> &ranking,
                        const std::string &id_column);

inline constexpr double kSimilarityBinWidth = 0.05;
inline constexpr int kSimilarityBins = 40;  // over [-1, 1]
inline constexpr double kSimilarityBand = 0.25;

struct ModalPairSimilarity {
  std::string name;  // "d1-d2", ...
  std::vector<std::string> ids;
  std::vector<double> values;
  std::array<int, kSimilarityBins> histogram{};
  double mean = 0.0;
  double std = 0.0;
  double inside_band = 0.0;  // fraction within [-0.25, 0.25]
};

struct SimilarityReport {
  std::vector<ModalPairSimilarity> pairs;  // d1-d2, d2-d3, d1-d3, t1-t2, ...
  double inside_band = 0.0;                // over all pairs

  std::string histogram_csv() const;
  std::string values_csv() const;
  std::string to_json() const;
  std::string to_svg() const;
};

// Histogram bin of a similarity; 1.0 falls in the last bin.
int similarity_bin(double s);

// Builds the report from per-entity embeddings: rows[m] holds the modality
// m embedding of every entity, `ids` names the entities.
ModalPairSimilarity pair_similarity(const std::string &name,
                                    const std::vector<std::string> &ids,
                                    const std::vector<RowVector> &a,
                                    const std::vector<RowVector> &b);

SimilarityReport modal_similarity(const TrainedModel &model,
                                  const TrainingData &prep);

// Sweep over config keys. Values are JSON literals.
using SweepAxis = std::pair<std::string, std::vector<std::string>>;

struct SweepGrid {
  std::vector<SweepAxis> axes;
  // Cartesian product when true; otherwise every axis is varied alone with
  // the other keys at their base values.
  bool cartesian = true;

  std::vector<std::vector<std::pair<std::string, std::string>>> points() const;
};

// {"dropout": [0.1, 0.2], ...}; keys must be config keys.
SweepGrid parse_sweep_grid(std::string_view json_text);
// Dropout, learning rate, GCN layers and attention heads, one at a time.
SweepGrid default_sweep_grid();

struct SweepRow {
  std::vector<std::pair<std::string, std::string>> setting;
  TrainReport report;
};

std::vector<SweepRow> run_sweep(const ModelConfig &base, const Dataset &data,
                                SplitScheme scheme, const SweepGrid &grid,
                                const std::string &dataset_name,
                                const TrainOptions &options = {});

// One row per grid point: the varied parameters then AUC/AUPR/Precision
// mean and std columns.
std::string sweep_csv(const std::vector<SweepRow> &rows);
std::string sweep_json(const std::vector<SweepRow> &rows);

} // namespace tridti
