//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Joint feature F = d1 | d2 | d3 | t1 | t2 | t3, the interaction MLP and the
// training objective
//   L = alpha * BCE(y, p) + beta * L_CL(drug) + gamma * L_CL(protein).

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tridti/autograd.hpp"
#include "tridti/params.hpp"

namespace tridti {

inline constexpr int kNumModalBlocks = 6;
inline constexpr double kProbabilityEps = 1e-7;

// Block order of the joint feature.
enum class ModalBlock { kD1, kD2, kD3, kT1, kT2, kT3 };

RowVector fuse(const std::array<RowVector, kNumModalBlocks> &blocks);
// Row-wise concatenation of six (N x D) blocks.
ag::Var fuse(const std::array<ag::Var, kNumModalBlocks> &blocks);
RowVector joint_block(const RowVector &f, ModalBlock block, int dim);

struct MlpParams {
  int hidden1 = 512;
  int hidden2 = 128;
  double dropout = 0.2;

  void validate() const;
};

// FC-ReLU, FC-ReLU, FC-sigmoid.
class MlpHead {
public:
  MlpHead(ParamStore &store, const std::string &prefix, int in_dim,
          const MlpParams &params, Rng &rng);

  // (N x in_dim) -> probabilities (N x 1).
  ag::Var forward(ag::Tape &tape, ag::Var f) const;
  ColVector predict(const Matrix &f) const;

  int in_dim() const { return in_dim_; }

private:
  MlpParams params_;
  int in_dim_;
  ag::Parameter *w1_, *b1_, *w2_, *b2_, *w3_, *b3_;
};

double bce_loss(std::span<const double> labels, std::span<const double> probs,
                double eps = kProbabilityEps);

struct LossWeights {
  double alpha = 1.0;
  double beta = 0.1;
  double gamma = 0.1;

  void validate() const;
};

double total_loss(double cls, double cl_drug, double cl_protein,
                  const LossWeights &w);
// Invalid contrastive Vars (disabled terms) contribute nothing.
ag::Var total_loss(ag::Var cls, ag::Var cl_drug, ag::Var cl_protein,
                   const LossWeights &w);

} // namespace tridti
