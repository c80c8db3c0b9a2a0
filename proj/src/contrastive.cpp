//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tridti/error.hpp"

namespace tridti {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw ValueError("contrastive: temperature must be positive");
}

// One direction: anchors a against positives b and intra-modal negatives.
ag::Var directional(ag::Var a, ag::Var b, double tau) {
  const auto n = static_cast<int>(a.rows());
  ag::Var logits = ag::scale(
      ag::concat_cols(std::vector<ag::Var>{ag::matmul_nt(a, b),
                                           ag::matmul_nt(a, a)}),
      1.0 / tau);
  std::vector<int> positive(n);
  std::vector<bool> valid(static_cast<std::size_t>(n) * 2 * n, true);
  for (int i = 0; i < n; ++i) {
    positive[i] = i;
    valid[static_cast<std::size_t>(i) * 2 * n + n + i] = false;
  }
  return ag::masked_nce(logits, std::move(positive), std::move(valid),
                        0.5 / n);
}

} // namespace

double cosine_sim(const RowVector &x, const RowVector &y) {
  if (x.size() != y.size())
    throw DimensionError("cosine_sim: length mismatch");
  const double nx = x.norm(), ny = y.norm();
  if (!(nx > 0.0) || !(ny > 0.0))
    throw ValueError("cosine_sim: zero-norm vector");
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

ag::Var pairwise_contrastive_loss(ag::Var za, ag::Var zb, double tau) {
  check_tau(tau);
  if (za.rows() != zb.rows() || za.cols() != zb.cols())
    throw DimensionError("contrastive: modality matrices differ in shape");
  if (za.rows() < 1)
    throw ValueError("contrastive: empty batch");
  ag::Var a = ag::row_normalize(za);
  ag::Var b = ag::row_normalize(zb);
  return ag::add(directional(a, b, tau), directional(b, a, tau));
}

double pairwise_contrastive_loss(const Matrix &za, const Matrix &zb,
                                 double tau) {
  ag::Tape tape;
  return pairwise_contrastive_loss(tape.constant(za), tape.constant(zb), tau)
      .scalar();
}

void ModalBatch::validate() const {
  check_tau(tau);
  if (z1.rows() != z2.rows() || z1.rows() != z3.rows()
      || z1.cols() != z2.cols() || z1.cols() != z3.cols())
    throw DimensionError("modal batch: matrices differ in shape");
  if (!z1.allFinite() || !z2.allFinite() || !z3.allFinite())
    throw ValueError("modal batch: non-finite entries");
}

ag::Var trimodal_loss(ag::Var z1, ag::Var z2, ag::Var z3, double tau,
                      ContrastivePairs pairs) {
  const int k = pairs.count();
  if (k == 0)
    return {};
  ag::Var total;
  auto acc = [&](ag::Var term) { total = total.valid() ? ag::add(total, term)
                                                       : term; };
  if (pairs.l12)
    acc(pairwise_contrastive_loss(z1, z2, tau));
  if (pairs.l23)
    acc(pairwise_contrastive_loss(z2, z3, tau));
  if (pairs.l13)
    acc(pairwise_contrastive_loss(z1, z3, tau));
  return k == 1 ? total : ag::scale(total, 1.0 / k);
}

double trimodal_loss(const ModalBatch &batch, ContrastivePairs pairs) {
  batch.validate();
  ag::Tape tape;
  ag::Var l = trimodal_loss(tape.constant(batch.z1), tape.constant(batch.z2),
                            tape.constant(batch.z3), batch.tau, pairs);
  return l.valid() ? l.scalar() : 0.0;
}

} // namespace tridti
