//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Minimal reverse-mode automatic differentiation over dense row-major
// matrices. A Tape records every operation of one forward pass; calling
// backward() on a 1x1 result accumulates gradients into the Parameters that
// took part in the computation.
//
// Vector (3D) features are stored "stacked": a set of N nodes with c vector
// channels is a (3N x c) matrix whose rows [0,N) hold x components, [N,2N)
// y components and [2N,3N) z components. Channel mixing is then a plain right
// multiplication and never touches the spatial axis.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tridti {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using ColVector = Eigen::Matrix<double, Eigen::Dynamic, 1>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Rng = std::mt19937_64;

namespace ag {

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

class Tape;

class Var {
public:
  Var() = default;

  const Matrix &value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const;

  Tape *tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

private:
  friend class Tape;
  Var(Tape *tape, int id) : tape_(tape), id_(id) { }

  Tape *tape_ = nullptr;
  int id_ = -1;
};

class Tape {
public:
  using BackwardFn = std::function<void(Tape &, const Matrix &grad)>;

  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var constant(Matrix value);
  Var param(Parameter &p);

  // Accumulates d(root)/d(param) into every Parameter::grad reached from
  // root. root must be 1x1.
  void backward(const Var &root);

  // Dropout and other stochastic layers consult these.
  void set_training(bool training, Rng *rng = nullptr) {
    training_ = training;
    rng_ = rng;
  }
  bool training() const { return training_; }
  Rng *rng() const { return rng_; }

  std::size_t size() const { return nodes_.size(); }

  // Op implementation interface.
  Var push(Matrix value, bool needs_grad, BackwardFn fn);
  const Matrix &value(int id) const { return nodes_[id].value; }
  bool needs_grad(int id) const { return nodes_[id].needs_grad; }
  Matrix &grad(int id);

private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool needs_grad = false;
    bool has_grad = false;
    BackwardFn backward;
    Parameter *param = nullptr;
  };

  std::deque<Node> nodes_;  // stable references across push()
  std::unordered_map<const Parameter *, int> param_ids_;
  bool training_ = false;
  Rng *rng_ = nullptr;
};

// Elementwise / shape-preserving.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double c);
Var relu(Var a);
Var sigmoid(Var a);
Var exp(Var a);
Var log(Var a);

// a (M x n) plus a 1 x n row broadcast over rows.
Var add_bias(Var a, Var bias);
// a (M x n) times a M x 1 column broadcast over columns.
Var mul_colwise(Var a, Var col);

Var matmul(Var a, Var b);
// a * b^T
Var matmul_nt(Var a, Var b);
Var transpose(Var a);
// Constant sparse left operand.
Var spmm(std::shared_ptr<const SparseMatrix> s, Var x);

Var sum(Var a);
Var mean(Var a);
// Column sums / means: (M x n) -> (1 x n).
Var sum_rows(Var a);
Var mean_rows(Var a);

Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);

// out[r] = a[index[r]]
Var gather_rows(Var a, std::vector<int> index);
// out[index[r]] += weight[r] * a[r]; out has out_rows rows. Empty weights
// means all ones.
Var scatter_add_rows(Var a, std::vector<int> index, Eigen::Index out_rows,
                     std::vector<double> weights = {});

// Row softmax. key_valid (size = cols) excludes columns; excluded entries of
// the output are exactly zero.
Var softmax_rows(Var a, const std::vector<bool> &key_valid = {});

// Per-row layer normalization with affine gamma/beta (1 x n each).
Var layer_norm(Var a, Var gamma, Var beta, double eps = 1e-5);

// L2 normalization of each row. Zero rows raise ValueError.
Var row_normalize(Var a);

// Stacked vector features (3N x c) -> per-channel norms (N x c). The
// gradient at an exactly zero vector is taken as zero.
Var vector_norms(Var v);
// Stacked vectors (3N x c) scaled channelwise by gate (N x c).
Var vector_gate(Var v, Var gate);
// Divides each node's vectors by the RMS of its channel norms; nodes whose
// vectors are all zero stay zero.
Var vector_layer_norm(Var v);

// InfoNCE-style term: coef * sum_i [ logsumexp_{j valid}(logits[i,j])
//                                     - logits[i, positive[i]] ].
// valid is a row-major (rows x cols) mask; positive entries must be valid.
Var masked_nce(Var logits, std::vector<int> positive, std::vector<bool> valid,
               double coef);

// Mean binary cross-entropy of probabilities p (N x 1) against labels with
// p clamped to [eps, 1 - eps].
Var bce(Var p, std::span<const double> labels, double eps = 1e-7);

// Inverted dropout. Identity when the tape is not in training mode or p == 0.
Var dropout(Var a, double p);

} // namespace ag
} // namespace tridti
