//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "tridti/autograd.hpp"

namespace tridti {

enum class Init {
  kZeros,
  kOnes,
  kXavier,  // uniform(-a, a), a = sqrt(6 / (fan_in + fan_out))
  kNormal,  // normal(0, 0.1)
};

// Owns every learnable tensor of a model. Parameters have stable addresses
// and unique names; creation order is the iteration order and is what makes
// seeded initialization reproducible.
class ParamStore {
public:
  ag::Parameter &create(const std::string &name, Eigen::Index rows,
                        Eigen::Index cols, Init init, Rng &rng);

  ag::Parameter &at(const std::string &name);
  const ag::Parameter &at(const std::string &name) const;
  bool contains(const std::string &name) const {
    return index_.count(name) != 0;
  }

  std::size_t size() const { return params_.size(); }
  std::size_t num_scalars() const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();

  // Snapshot/restore of parameter values, used for best-epoch selection.
  std::vector<Matrix> snapshot() const;
  void restore(const std::vector<Matrix> &values);

private:
  std::deque<ag::Parameter> params_;
  std::map<std::string, std::size_t> index_;
};

// Adaptive moment estimation with optional L2 weight decay folded into the
// gradient.
class Adam {
public:
  struct Options {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
  };

  Adam(ParamStore &store, Options options);

  void step();
  long steps() const { return t_; }

private:
  ParamStore &store_;
  Options opt_;
  std::vector<Matrix> m_, v_;
  long t_ = 0;
};

} // namespace tridti
