//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace tridti {

enum class SplitScheme {
  kRepeated811,  // independent seeded 8:1:1 partitions
  kGpcrFixed,    // given train/test, 20% of train carved out as validation
  kKFold5,       // classic 5-fold: fold r is test, 1/8 of the rest is val
};

SplitScheme parse_split_scheme(std::string_view name);
std::string_view split_scheme_name(SplitScheme s);

struct DatasetSplit {
  std::vector<int> train, val, test;
  std::uint64_t seed = 0;
  SplitScheme scheme = SplitScheme::kRepeated811;

  friend bool operator==(const DatasetSplit &, const DatasetSplit &) = default;
};

// Sizes: train = floor(0.8 n), val = floor(0.1 n), test = the rest. Repeat r
// shuffles with seed + r. Requires n >= 10.
std::vector<DatasetSplit> make_splits(int n, SplitScheme scheme,
                                      std::uint64_t seed, int repeats);

// Fixed train/test index lists; validation is floor(0.2 * |train|) indices
// drawn from train with the seed.
DatasetSplit gpcr_split(const std::vector<int> &train,
                        const std::vector<int> &test, std::uint64_t seed);

// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<int> seeded_permutation(int n, std::uint64_t seed);

} // namespace tridti
