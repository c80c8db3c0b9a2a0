//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tridti/error.hpp"

namespace tridti {

namespace {

void check(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size())
    throw DimensionError("metrics: " + std::to_string(labels.size()) +
                         " labels vs " + std::to_string(scores.size()) +
                         " scores");
  for (int y : labels)
    if (y != 0 && y != 1)
      throw ValueError("metrics: labels must be 0 or 1");
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const int> labels) {
  const auto pos = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), 1));
  return {pos, labels.size() - pos};
}

void require_both(std::span<const int> labels, const char *what) {
  auto [pos, neg] = class_counts(labels);
  if (pos == 0 || neg == 0)
    throw ValueError(std::string(what) +
                     " is undefined when only one class is present");
}

// Indices sorted by descending score.
std::vector<std::size_t> by_score_desc(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

} // namespace

double roc_auc(std::span<const int> labels, std::span<const double> scores) {
  check(labels, scores);
  require_both(labels, "AUC");
  auto [pos, neg] = class_counts(labels);
  // Midranks over ascending scores.
  std::vector<std::size_t> order = by_score_desc(scores);
  std::reverse(order.begin(), order.end());
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]])
      ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1)
        rank_sum += midrank;
    i = j;
  }
  const double p = static_cast<double>(pos), n = static_cast<double>(neg);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

double average_precision(std::span<const int> labels,
                         std::span<const double> scores) {
  check(labels, scores);
  require_both(labels, "AUPR");
  const double pos = static_cast<double>(class_counts(labels).first);
  std::vector<std::size_t> order = by_score_desc(scores);
  double tp = 0.0, fp = 0.0, prev_recall = 0.0, ap = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1.0;
      ++j;
    }
    const double recall = tp / pos;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
    i = j;
  }
  return ap;
}

double precision_at(std::span<const int> labels,
                    std::span<const double> scores, double threshold,
                    std::vector<std::string> *warnings) {
  check(labels, scores);
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (scores[i] >= threshold)
      ++(labels[i] == 1 ? tp : fp);
  if (tp + fp == 0) {
    if (warnings)
      warnings->push_back("precision: no predicted positives at threshold " +
                          std::to_string(threshold) + ", reported as 0");
    return 0.0;
  }
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

Metrics compute_metrics(std::span<const int> labels,
                        std::span<const double> scores, double threshold,
                        std::vector<std::string> *warnings) {
  return {roc_auc(labels, scores), average_precision(labels, scores),
          precision_at(labels, scores, threshold, warnings)};
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd r;
  r.count = static_cast<int>(values.size());
  if (values.empty())
    return r;
  r.mean = std::accumulate(values.begin(), values.end(), 0.0) / r.count;
  if (r.count > 1) {
    double ss = 0.0;
    for (double v : values)
      ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / (r.count - 1));
  }
  return r;
}

} // namespace tridti
