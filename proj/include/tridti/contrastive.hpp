//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Cross-modal contrastive alignment.
//
// For modality matrices Za, Zb (N x D, rows aligned by entity) and
// temperature tau, with s the cosine similarity:
//   L^a = -1/(2N) sum_i log( e^{s(a_i,b_i)/tau} /
//           (sum_j e^{s(a_i,b_j)/tau} + sum_{j != i} e^{s(a_i,a_j)/tau}) )
//   L_ab = L^a + L^b   (L^b swaps a and b)
// and the tri-modal loss is the mean of L_12, L_23 and L_13.

#pragma once

#include <array>

#include "tridti/autograd.hpp"

namespace tridti {

inline constexpr double kDefaultTemperature = 0.1;

double cosine_sim(const RowVector &x, const RowVector &y);

ag::Var pairwise_contrastive_loss(ag::Var za, ag::Var zb, double tau);
double pairwise_contrastive_loss(const Matrix &za, const Matrix &zb,
                                 double tau);

// Which of the pairs (1,2), (2,3), (1,3) take part. The loss is the mean
// over the enabled pairs.
struct ContrastivePairs {
  bool l12 = true;
  bool l23 = true;
  bool l13 = true;

  int count() const { return int(l12) + int(l23) + int(l13); }
};

struct ModalBatch {
  Matrix z1, z2, z3;
  double tau = kDefaultTemperature;

  void validate() const;
};

// Returns an invalid Var when no pair is enabled.
ag::Var trimodal_loss(ag::Var z1, ag::Var z2, ag::Var z3, double tau,
                      ContrastivePairs pairs = {});
double trimodal_loss(const ModalBatch &batch, ContrastivePairs pairs = {});

} // namespace tridti
