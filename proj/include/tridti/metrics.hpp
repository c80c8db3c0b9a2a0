//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <string>
#include <vector>

namespace tridti {

struct Metrics {
  double auc = 0.0;
  double aupr = 0.0;
  double precision = 0.0;
};

// Mann-Whitney statistic; tied scores count one half.
double roc_auc(std::span<const int> labels, std::span<const double> scores);

// Step integration of the precision-recall curve: the sum over distinct
// score thresholds (descending) of precision * recall increment.
double average_precision(std::span<const int> labels,
                         std::span<const double> scores);

// TP / (TP + FP) at score >= threshold; 0 with a warning appended when
// nothing is predicted positive.
double precision_at(std::span<const int> labels,
                    std::span<const double> scores, double threshold,
                    std::vector<std::string> *warnings = nullptr);

// Throws ValueError when only one class is present.
Metrics compute_metrics(std::span<const int> labels,
                        std::span<const double> scores, double threshold = 0.5,
                        std::vector<std::string> *warnings = nullptr);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
  int count = 0;
};

MeanStd mean_std(std::span<const double> values);

} // namespace tridti
