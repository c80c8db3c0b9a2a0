//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/params.hpp"

#include <cmath>

#include "tridti/error.hpp"

namespace tridti {

ag::Parameter &ParamStore::create(const std::string &name, Eigen::Index rows,
                                  Eigen::Index cols, Init init, Rng &rng) {
  if (contains(name))
    throw ValueError("duplicate parameter name '" + name + "'");
  ag::Parameter p;
  p.name = name;
  switch (init) {
  case Init::kZeros:
    p.value.setZero(rows, cols);
    break;
  case Init::kOnes:
    p.value.setOnes(rows, cols);
    break;
  case Init::kXavier: {
    const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> u(-a, a);
    p.value.resize(rows, cols);
    for (Eigen::Index i = 0; i < p.value.size(); ++i)
      p.value.data()[i] = u(rng);
    break;
  }
  case Init::kNormal: {
    std::normal_distribution<double> nd(0.0, 0.1);
    p.value.resize(rows, cols);
    for (Eigen::Index i = 0; i < p.value.size(); ++i)
      p.value.data()[i] = nd(rng);
    break;
  }
  }
  p.zero_grad();
  index_.emplace(name, params_.size());
  params_.push_back(std::move(p));
  return params_.back();
}

ag::Parameter &ParamStore::at(const std::string &name) {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValueError("unknown parameter '" + name + "'");
  return params_[it->second];
}

const ag::Parameter &ParamStore::at(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValueError("unknown parameter '" + name + "'");
  return params_[it->second];
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto &p : params_)
    n += static_cast<std::size_t>(p.value.size());
  return n;
}

void ParamStore::zero_grad() {
  for (auto &p : params_)
    p.zero_grad();
}

std::vector<Matrix> ParamStore::snapshot() const {
  std::vector<Matrix> out;
  out.reserve(params_.size());
  for (const auto &p : params_)
    out.push_back(p.value);
  return out;
}

void ParamStore::restore(const std::vector<Matrix> &values) {
  if (values.size() != params_.size())
    throw DimensionError("restore: snapshot has a different parameter count");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].rows() != params_[i].value.rows()
        || values[i].cols() != params_[i].value.cols())
      throw DimensionError("restore: shape mismatch for " + params_[i].name);
    params_[i].value = values[i];
  }
}

Adam::Adam(ParamStore &store, Options options)
    : store_(store), opt_(options) {
  if (!(opt_.learning_rate > 0.0))
    throw ValueError("learning rate must be positive");
  for (const auto &p : store_) {
    m_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    v_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  std::size_t k = 0;
  for (auto &p : store_) {
    Matrix g = p.grad;
    if (opt_.weight_decay != 0.0)
      g += opt_.weight_decay * p.value;
    m_[k] = opt_.beta1 * m_[k] + (1.0 - opt_.beta1) * g;
    v_[k] = opt_.beta2 * v_[k] + (1.0 - opt_.beta2) * g.cwiseAbs2();
    p.value.array() -= opt_.learning_rate * (m_[k].array() / bc1)
                       / ((v_[k].array() / bc2).sqrt() + opt_.eps);
    ++k;
  }
}

} // namespace tridti
