//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/splits.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "tridti/error.hpp"

namespace tridti {

namespace {

constexpr std::array<std::string_view, 3> kSchemeNames = {
    "repeated_8_1_1", "gpcr_fixed", "kfold_5"};

} // namespace

SplitScheme parse_split_scheme(std::string_view name) {
  for (std::size_t i = 0; i < kSchemeNames.size(); ++i)
    if (kSchemeNames[i] == name)
      return static_cast<SplitScheme>(i);
  throw UsageError("unknown split scheme '" + std::string(name) + "'");
}

std::string_view split_scheme_name(SplitScheme s) {
  return kSchemeNames[static_cast<std::size_t>(s)];
}

std::vector<int> seeded_permutation(int n, std::uint64_t seed) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

std::vector<DatasetSplit> make_splits(int n, SplitScheme scheme,
                                      std::uint64_t seed, int repeats) {
  if (n < 10)
    throw ValueError("splits: need at least 10 samples, got " +
                     std::to_string(n));
  if (repeats < 1)
    throw ValueError("splits: repeats must be >= 1");
  if (scheme == SplitScheme::kGpcrFixed)
    throw UsageError("splits: gpcr_fixed needs explicit train/test lists");
  std::vector<DatasetSplit> out;
  if (scheme == SplitScheme::kRepeated811) {
    const int n_train = n * 8 / 10, n_val = n / 10;
    for (int r = 0; r < repeats; ++r) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(r);
      std::vector<int> p = seeded_permutation(n, s);
      DatasetSplit d;
      d.seed = s;
      d.scheme = scheme;
      d.train.assign(p.begin(), p.begin() + n_train);
      d.val.assign(p.begin() + n_train, p.begin() + n_train + n_val);
      d.test.assign(p.begin() + n_train + n_val, p.end());
      out.push_back(std::move(d));
    }
    return out;
  }
  // Classic 5-fold over one permutation; repeats beyond 5 wrap around.
  std::vector<int> p = seeded_permutation(n, seed);
  for (int r = 0; r < repeats; ++r) {
    const int fold = r % 5;
    const int lo = n * fold / 5, hi = n * (fold + 1) / 5;
    DatasetSplit d;
    d.seed = seed;
    d.scheme = scheme;
    d.test.assign(p.begin() + lo, p.begin() + hi);
    std::vector<int> rest(p.begin(), p.begin() + lo);
    rest.insert(rest.end(), p.begin() + hi, p.end());
    const auto n_val = rest.size() / 8;
    d.val.assign(rest.begin(), rest.begin() + static_cast<long>(n_val));
    d.train.assign(rest.begin() + static_cast<long>(n_val), rest.end());
    out.push_back(std::move(d));
  }
  return out;
}

DatasetSplit gpcr_split(const std::vector<int> &train,
                        const std::vector<int> &test, std::uint64_t seed) {
  std::set<int> seen;
  for (int i : train)
    if (!seen.insert(i).second)
      throw IntegrityError("gpcr split: duplicate train index " +
                           std::to_string(i));
  for (int i : test)
    if (!seen.insert(i).second)
      throw IntegrityError("gpcr split: index " + std::to_string(i) +
                           " is in both train and test");
  if (train.size() < 5)
    throw ValueError("gpcr split: training set too small to carve "
                     "validation");
  const auto n_val = train.size() / 5;
  std::vector<int> p =
      seeded_permutation(static_cast<int>(train.size()), seed);
  DatasetSplit d;
  d.seed = seed;
  d.scheme = SplitScheme::kGpcrFixed;
  for (std::size_t k = 0; k < p.size(); ++k)
    (k < n_val ? d.val : d.train).push_back(train[p[k]]);
  d.test = test;
  return d;
}

} // namespace tridti
