//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "tridti/error.hpp"

namespace tridti {

RowVector fuse(const std::array<RowVector, kNumModalBlocks> &blocks) {
  const Eigen::Index d = blocks[0].size();
  RowVector f(kNumModalBlocks * d);
  for (int k = 0; k < kNumModalBlocks; ++k) {
    if (blocks[k].size() != d)
      throw DimensionError("fuse: block " + std::to_string(k) + " has " +
                           std::to_string(blocks[k].size()) +
                           " entries, expected " + std::to_string(d));
    f.segment(k * d, d) = blocks[k];
  }
  return f;
}

ag::Var fuse(const std::array<ag::Var, kNumModalBlocks> &blocks) {
  for (const ag::Var &b : blocks)
    if (b.rows() != blocks[0].rows() || b.cols() != blocks[0].cols())
      throw DimensionError("fuse: modality blocks differ in shape");
  return ag::concat_cols(blocks);
}

RowVector joint_block(const RowVector &f, ModalBlock block, int dim) {
  const int k = static_cast<int>(block);
  if (f.size() != kNumModalBlocks * dim)
    throw DimensionError("joint_block: feature length is not 6 * dim");
  return f.segment(k * dim, dim);
}

void MlpParams::validate() const {
  if (hidden1 < 1 || hidden2 < 1)
    throw ValueError("mlp: hidden widths must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0))
    throw ValueError("mlp: dropout must lie in [0, 1)");
}

MlpHead::MlpHead(ParamStore &store, const std::string &prefix, int in_dim,
                 const MlpParams &params, Rng &rng)
    : params_(params), in_dim_(in_dim) {
  params_.validate();
  w1_ = &store.create(prefix + ".fc1.w", in_dim, params.hidden1,
                      Init::kXavier, rng);
  b1_ = &store.create(prefix + ".fc1.b", 1, params.hidden1, Init::kZeros, rng);
  w2_ = &store.create(prefix + ".fc2.w", params.hidden1, params.hidden2,
                      Init::kXavier, rng);
  b2_ = &store.create(prefix + ".fc2.b", 1, params.hidden2, Init::kZeros, rng);
  w3_ = &store.create(prefix + ".fc3.w", params.hidden2, 1, Init::kXavier,
                      rng);
  b3_ = &store.create(prefix + ".fc3.b", 1, 1, Init::kZeros, rng);
}

ag::Var MlpHead::forward(ag::Tape &tape, ag::Var f) const {
  if (f.cols() != in_dim_)
    throw DimensionError("mlp: expected " + std::to_string(in_dim_) +
                         " input columns, got " + std::to_string(f.cols()));
  ag::Var h = ag::relu(ag::add_bias(ag::matmul(f, tape.param(*w1_)),
                                    tape.param(*b1_)));
  h = ag::dropout(h, params_.dropout);
  h = ag::relu(ag::add_bias(ag::matmul(h, tape.param(*w2_)),
                            tape.param(*b2_)));
  h = ag::dropout(h, params_.dropout);
  return ag::sigmoid(ag::add_bias(ag::matmul(h, tape.param(*w3_)),
                                  tape.param(*b3_)));
}

ColVector MlpHead::predict(const Matrix &f) const {
  ag::Tape tape;
  return forward(tape, tape.constant(f)).value().col(0);
}

double bce_loss(std::span<const double> labels, std::span<const double> probs,
                double eps) {
  if (labels.size() != probs.size())
    throw DimensionError("bce: " + std::to_string(labels.size()) +
                         " labels vs " + std::to_string(probs.size()) +
                         " probabilities");
  if (labels.empty())
    throw ValueError("bce: empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = std::clamp(probs[i], eps, 1.0 - eps);
    total += labels[i] * std::log(p) + (1.0 - labels[i]) * std::log(1.0 - p);
  }
  return -total / static_cast<double>(labels.size());
}

void LossWeights::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0))
    throw ValueError("loss weights must be nonnegative");
  if (alpha == 0.0 && beta == 0.0 && gamma == 0.0)
    throw ValueError("loss weights must not all be zero");
}

double total_loss(double cls, double cl_drug, double cl_protein,
                  const LossWeights &w) {
  return w.alpha * cls + w.beta * cl_drug + w.gamma * cl_protein;
}

ag::Var total_loss(ag::Var cls, ag::Var cl_drug, ag::Var cl_protein,
                   const LossWeights &w) {
  ag::Var total = ag::scale(cls, w.alpha);
  if (cl_drug.valid() && w.beta != 0.0)
    total = ag::add(total, ag::scale(cl_drug, w.beta));
  if (cl_protein.valid() && w.gamma != 0.0)
    total = ag::add(total, ag::scale(cl_protein, w.gamma));
  return total;
}

} // namespace tridti
