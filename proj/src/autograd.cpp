//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tridti/error.hpp"

namespace tridti::ag {

const Matrix &Var::value() const { return tape_->value(id_); }

double Var::scalar() const {
  const Matrix &v = value();
  if (v.rows() != 1 || v.cols() != 1)
    throw DimensionError("scalar() on a non 1x1 value");
  return v(0, 0);
}

Var Tape::constant(Matrix value) { return push(std::move(value), false, {}); }

Var Tape::param(Parameter &p) {
  auto it = param_ids_.find(&p);
  if (it != param_ids_.end())
    return Var(this, it->second);
  Var v = push(p.value, true, {});
  nodes_[v.id()].param = &p;
  param_ids_.emplace(&p, v.id());
  return v;
}

Var Tape::push(Matrix value, bool needs_grad, BackwardFn fn) {
  Node node;
  node.value = std::move(value);
  node.needs_grad = needs_grad;
  if (needs_grad)
    node.backward = std::move(fn);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Matrix &Tape::grad(int id) {
  Node &n = nodes_[id];
  if (!n.has_grad) {
    n.grad.setZero(n.value.rows(), n.value.cols());
    n.has_grad = true;
  }
  return n.grad;
}

void Tape::backward(const Var &root) {
  if (root.tape() != this)
    throw ValueError("backward() root belongs to another tape");
  const Matrix &rv = value(root.id());
  if (rv.rows() != 1 || rv.cols() != 1)
    throw DimensionError("backward() requires a 1x1 root");
  if (!needs_grad(root.id()))
    return;

  grad(root.id())(0, 0) += 1.0;
  for (int id = root.id(); id >= 0; --id) {
    Node &n = nodes_[id];
    if (!n.has_grad)
      continue;
    if (n.backward)
      n.backward(*this, n.grad);
    if (n.param != nullptr) {
      if (n.param->grad.rows() != n.grad.rows()
          || n.param->grad.cols() != n.grad.cols())
        n.param->zero_grad();
      n.param->grad += n.grad;
    }
  }
}

namespace {

Tape &same_tape(const Var &a, const Var &b) {
  if (a.tape() == nullptr || a.tape() != b.tape())
    throw ValueError("operands recorded on different tapes");
  return *a.tape();
}

void require_same_shape(const Var &a, const Var &b, const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    throw DimensionError(os.str());
  }
}

bool any_grad(Tape &t, std::initializer_list<int> ids) {
  return std::any_of(ids.begin(), ids.end(),
                     [&](int id) { return t.needs_grad(id); });
}

} // namespace

Var add(Var a, Var b) {
  Tape &t = same_tape(a, b);
  require_same_shape(a, b, "add");
  const int ia = a.id(), ib = b.id();
  return t.push(a.value() + b.value(), any_grad(t, {ia, ib}),
                [ia, ib](Tape &t, const Matrix &g) {
                  if (t.needs_grad(ia))
                    t.grad(ia) += g;
                  if (t.needs_grad(ib))
                    t.grad(ib) += g;
                });
}

Var sub(Var a, Var b) {
  Tape &t = same_tape(a, b);
  require_same_shape(a, b, "sub");
  const int ia = a.id(), ib = b.id();
  return t.push(a.value() - b.value(), any_grad(t, {ia, ib}),
                [ia, ib](Tape &t, const Matrix &g) {
                  if (t.needs_grad(ia))
                    t.grad(ia) += g;
                  if (t.needs_grad(ib))
                    t.grad(ib) -= g;
                });
}

Var mul(Var a, Var b) {
  Tape &t = same_tape(a, b);
  require_same_shape(a, b, "mul");
  const int ia = a.id(), ib = b.id();
  return t.push(a.value().cwiseProduct(b.value()), any_grad(t, {ia, ib}),
                [ia, ib](Tape &t, const Matrix &g) {
                  if (t.needs_grad(ia))
                    t.grad(ia) += g.cwiseProduct(t.value(ib));
                  if (t.needs_grad(ib))
                    t.grad(ib) += g.cwiseProduct(t.value(ia));
                });
}

Var scale(Var a, double c) {
  Tape &t = *a.tape();
  const int ia = a.id();
  return t.push(a.value() * c, t.needs_grad(ia),
                [ia, c](Tape &t, const Matrix &g) { t.grad(ia) += g * c; });
}

Var relu(Var a) {
  Tape &t = *a.tape();
  const int ia = a.id();
  return t.push(a.value().cwiseMax(0.0), t.needs_grad(ia),
                [ia](Tape &t, const Matrix &g) {
                  const Matrix &x = t.value(ia);
                  t.grad(ia) += (x.array() > 0.0).select(g, 0.0).matrix();
                });
}

Var sigmoid(Var a) {
  Tape &t = *a.tape();
  const int ia = a.id();
  Matrix y = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  Matrix dy = (y.array() * (1.0 - y.array())).matrix();
  return t.push(std::move(y), t.needs_grad(ia),
                [ia, dy = std::move(dy)](Tape &t, const Matrix &g) {
                  t.grad(ia) += g.cwiseProduct(dy);
                });
}

Var exp(Var a) {
  Tape &t = *a.tape();
  const int ia = a.id();
  Matrix y = a.value().array().exp().matrix();
  Matrix ycopy = y;
  return t.push(std::move(y), t.needs_grad(ia),
                [ia, ycopy = std::move(ycopy)](Tape &t, const Matrix &g) {
                  t.grad(ia) += g.cwiseProduct(ycopy);
                });
}

Var log(Var a) {
  Tape &t = *a.tape();
  const int ia = a.id();
  return t.push(a.value().array().log().matrix(), t.needs_grad(ia),
                [ia](Tape &t, const Matrix &g) {
                  t.grad(ia) += g.cwiseQuotient(t.value(ia));
                });
}

Var add_bias(Var a, Var bias) {
  Tape &t = same_tape(a, bias);
  if (bias.rows() != 1 || bias.cols() != a.cols())
    throw DimensionError("add_bias: bias must be 1 x " +
                         std::to_string(a.cols()));
  const int ia = a.id(), ib = bias.id();
  Matrix y = a.value().rowwise() + bias.value().row(0);
  return t.push(std::move(y), any_grad(t, {ia, ib}),
                [ia, ib](Tape &t, const Matrix &g) {
                  if (t.needs_grad(ia))
                    t.grad(ia) += g;
                  if (t.needs_grad(ib))
                    t.grad(ib) += g.colwise().sum();
                });
}

Var mul_colwise(Var a, Var col) {
  Tape &t = same_tape(a, col);
  if (col.cols() != 1 || col.rows() != a.rows())
    throw DimensionError("mul_colwise: column must be " +
                         std::to_string(a.rows()) + " x 1");
  const int ia = a.id(), ic = col.id();
  Matrix y = a.value().array().colwise() * col.value().col(0).array();
  return t.push(std::move(y), any_grad(t, {ia, ic}),
                [ia, ic](Tape &t, const Matrix &g) {
                  if (t.needs_grad(ia))
                    t.grad(ia) += (g.array().colwise()
                                   * t.value(ic).col(0).array())
                                      .matrix();
                  if (t.needs_grad(ic))
                    t.grad(ic) +=
                        g.cwiseProduct(t.value(ia)).rowwise().sum();
                });
}

Var matmul(Var a, Var b) {
  Tape &t = same_tape(a, b);
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "matmul: " << a.rows() << "x" << a.cols() << " * " << b.rows()
       << "x" << b.cols();
    throw DimensionError(os.str());
  }
  const int ia = a.id(), ib = b.id();
  return t.push(a.value() * b.value(), any_grad(t, {ia, ib}),
                [ia, ib](Tape &t, const Matrix &g) {
                  if (t.needs_grad(ia))
                    t.grad(ia).noalias() += g * t.value(ib).transpose();
                  if (t.needs_grad(ib))
                    t.grad(ib).noalias() += t.value(ia).transpose() * g;
                });
}

Var matmul_nt(Var a, Var b) {
  Tape &t = same_tape(a, b);
  if (a.cols() != b.cols())
    throw DimensionError("matmul_nt: inner dimensions differ");
  const int ia = a.id(), ib = b.id();
  return t.push(a.value() * b.value().transpose(), any_grad(t, {ia, ib}),
                [ia, ib](Tape &t, const Matrix &g) {
                  if (t.needs_grad(ia))
                    t.grad(ia).noalias() += g * t.value(ib);
                  if (t.needs_grad(ib))
                    t.grad(ib).noalias() += g.transpose() * t.value(ia);
                });
}

Var transpose(Var a) {
  Tape &t = *a.tape();
  const int ia = a.id();
  return t.push(a.value().transpose(), t.needs_grad(ia),
                [ia](Tape &t, const Matrix &g) {
                  t.grad(ia) += g.transpose();
                });
}

Var spmm(std::shared_ptr<const SparseMatrix> s, Var x) {
  Tape &t = *x.tape();
  if (s->cols() != x.rows())
    throw DimensionError("spmm: sparse operand has " +
                         std::to_string(s->cols()) + " cols, dense has " +
                         std::to_string(x.rows()) + " rows");
  const int ix = x.id();
  Matrix y = (*s) * x.value();
  return t.push(std::move(y), t.needs_grad(ix),
                [ix, s](Tape &t, const Matrix &g) {
                  t.grad(ix) += s->transpose() * g;
                });
}

Var sum(Var a) {
  Tape &t = *a.tape();
  const int ia = a.id();
  Matrix y(1, 1);
  y(0, 0) = a.value().sum();
  return t.push(std::move(y), t.needs_grad(ia),
                [ia](Tape &t, const Matrix &g) {
                  t.grad(ia).array() += g(0, 0);
                });
}

Var mean(Var a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0)
    throw DimensionError("mean of an empty matrix");
  return scale(sum(a), 1.0 / n);
}

Var sum_rows(Var a) {
  Tape &t = *a.tape();
  const int ia = a.id();
  Matrix y = a.value().colwise().sum();
  return t.push(std::move(y), t.needs_grad(ia),
                [ia](Tape &t, const Matrix &g) {
                  t.grad(ia).rowwise() += g.row(0);
                });
}

Var mean_rows(Var a) {
  if (a.rows() == 0)
    throw DimensionError("mean_rows of an empty matrix");
  return scale(sum_rows(a), 1.0 / static_cast<double>(a.rows()));
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty())
    throw DimensionError("concat_cols of nothing");
  Tape &t = *parts.front().tape();
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  bool ng = false;
  for (const Var &p : parts) {
    if (p.tape() != &t)
      throw ValueError("concat_cols: operands on different tapes");
    if (p.rows() != rows)
      throw DimensionError("concat_cols: row counts differ");
    cols += p.cols();
    ng = ng || t.needs_grad(p.id());
  }
  Matrix y(rows, cols);
  std::vector<std::pair<int, Eigen::Index>> spans;
  Eigen::Index off = 0;
  for (const Var &p : parts) {
    y.middleCols(off, p.cols()) = p.value();
    spans.emplace_back(p.id(), off);
    off += p.cols();
  }
  return t.push(std::move(y), ng, [spans](Tape &t, const Matrix &g) {
    for (auto [id, start] : spans)
      if (t.needs_grad(id))
        t.grad(id) += g.middleCols(start, t.value(id).cols());
  });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty())
    throw DimensionError("concat_rows of nothing");
  Tape &t = *parts.front().tape();
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index rows = 0;
  bool ng = false;
  for (const Var &p : parts) {
    if (p.tape() != &t)
      throw ValueError("concat_rows: operands on different tapes");
    if (p.cols() != cols)
      throw DimensionError("concat_rows: column counts differ");
    rows += p.rows();
    ng = ng || t.needs_grad(p.id());
  }
  Matrix y(rows, cols);
  std::vector<std::pair<int, Eigen::Index>> spans;
  Eigen::Index off = 0;
  for (const Var &p : parts) {
    y.middleRows(off, p.rows()) = p.value();
    spans.emplace_back(p.id(), off);
    off += p.rows();
  }
  return t.push(std::move(y), ng, [spans](Tape &t, const Matrix &g) {
    for (auto [id, start] : spans)
      if (t.needs_grad(id))
        t.grad(id) += g.middleRows(start, t.value(id).rows());
  });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols())
    throw BoundsError("slice_cols out of range");
  Tape &t = *a.tape();
  const int ia = a.id();
  return t.push(a.value().middleCols(start, count), t.needs_grad(ia),
                [ia, start, count](Tape &t, const Matrix &g) {
                  t.grad(ia).middleCols(start, count) += g;
                });
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows())
    throw BoundsError("slice_rows out of range");
  Tape &t = *a.tape();
  const int ia = a.id();
  return t.push(a.value().middleRows(start, count), t.needs_grad(ia),
                [ia, start, count](Tape &t, const Matrix &g) {
                  t.grad(ia).middleRows(start, count) += g;
                });
}

Var gather_rows(Var a, std::vector<int> index) {
  Tape &t = *a.tape();
  const Matrix &x = a.value();
  Matrix y(static_cast<Eigen::Index>(index.size()), x.cols());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] < 0 || index[r] >= x.rows())
      throw BoundsError("gather_rows: index " + std::to_string(index[r]) +
                        " outside [0, " + std::to_string(x.rows()) + ")");
    y.row(static_cast<Eigen::Index>(r)) = x.row(index[r]);
  }
  const int ia = a.id();
  return t.push(std::move(y), t.needs_grad(ia),
                [ia, index = std::move(index)](Tape &t, const Matrix &g) {
                  Matrix &ga = t.grad(ia);
                  for (std::size_t r = 0; r < index.size(); ++r)
                    ga.row(index[r]) += g.row(static_cast<Eigen::Index>(r));
                });
}

Var scatter_add_rows(Var a, std::vector<int> index, Eigen::Index out_rows,
                     std::vector<double> weights) {
  Tape &t = *a.tape();
  const Matrix &x = a.value();
  if (static_cast<Eigen::Index>(index.size()) != x.rows())
    throw DimensionError("scatter_add_rows: one index per input row");
  if (!weights.empty() && weights.size() != index.size())
    throw DimensionError("scatter_add_rows: one weight per input row");
  Matrix y = Matrix::Zero(out_rows, x.cols());
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] < 0 || index[r] >= out_rows)
      throw BoundsError("scatter_add_rows: target row out of range");
    const double w = weights.empty() ? 1.0 : weights[r];
    y.row(index[r]) += w * x.row(static_cast<Eigen::Index>(r));
  }
  const int ia = a.id();
  return t.push(std::move(y), t.needs_grad(ia),
                [ia, index = std::move(index),
                 weights = std::move(weights)](Tape &t, const Matrix &g) {
                  Matrix &ga = t.grad(ia);
                  for (std::size_t r = 0; r < index.size(); ++r) {
                    const double w = weights.empty() ? 1.0 : weights[r];
                    ga.row(static_cast<Eigen::Index>(r)) +=
                        w * g.row(index[r]);
                  }
                });
}

Var softmax_rows(Var a, const std::vector<bool> &key_valid) {
  Tape &t = *a.tape();
  const Matrix &x = a.value();
  if (!key_valid.empty()
      && static_cast<Eigen::Index>(key_valid.size()) != x.cols())
    throw DimensionError("softmax_rows: mask length differs from columns");
  std::vector<bool> valid(x.cols(), true);
  for (std::size_t j = 0; j < key_valid.size(); ++j)
    valid[j] = key_valid[j];
  if (std::none_of(valid.begin(), valid.end(), [](bool b) { return b; }))
    throw ValueError("softmax_rows: every key is masked");

  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (valid[j])
        mx = std::max(mx, x(i, j));
    double z = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (valid[j]) {
        y(i, j) = std::exp(x(i, j) - mx);
        z += y(i, j);
      }
    y.row(i) /= z;
  }
  const int ia = a.id();
  Matrix ycopy = y;
  return t.push(std::move(y), t.needs_grad(ia),
                [ia, ycopy = std::move(ycopy)](Tape &t, const Matrix &g) {
                  ColVector dot = g.cwiseProduct(ycopy).rowwise().sum();
                  Matrix gx = ycopy.cwiseProduct(
                      (g.colwise() - dot).matrix());
                  t.grad(ia) += gx;
                });
}

Var layer_norm(Var a, Var gamma, Var beta, double eps) {
  Tape &t = same_tape(a, gamma);
  const Matrix &x = a.value();
  const Eigen::Index n = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != n || beta.rows() != 1
      || beta.cols() != n)
    throw DimensionError("layer_norm: gamma/beta must be 1 x " +
                         std::to_string(n));
  Matrix xhat(x.rows(), n);
  ColVector inv_std(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mu = x.row(i).mean();
    const double var = (x.row(i).array() - mu).square().mean();
    inv_std(i) = 1.0 / std::sqrt(var + eps);
    xhat.row(i) = (x.row(i).array() - mu) * inv_std(i);
  }
  Matrix y = (xhat.array().rowwise() * gamma.value().row(0).array())
                 .rowwise()
             + beta.value().row(0).array();
  const int ia = a.id(), ig = gamma.id(), ib = beta.id();
  return t.push(
      std::move(y), any_grad(t, {ia, ig, ib}),
      [ia, ig, ib, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](Tape &t, const Matrix &g) {
        if (t.needs_grad(ig))
          t.grad(ig) += g.cwiseProduct(xhat).colwise().sum();
        if (t.needs_grad(ib))
          t.grad(ib) += g.colwise().sum();
        if (t.needs_grad(ia)) {
          Matrix gx = g.array().rowwise() * t.value(ig).row(0).array();
          const double n = static_cast<double>(gx.cols());
          Matrix &ga = t.grad(ia);
          for (Eigen::Index i = 0; i < gx.rows(); ++i) {
            const double m1 = gx.row(i).sum() / n;
            const double m2 = gx.row(i).dot(xhat.row(i)) / n;
            ga.row(i) += inv_std(i)
                         * (gx.row(i).array() - m1 - xhat.row(i).array() * m2)
                               .matrix();
          }
        }
      });
}

Var row_normalize(Var a) {
  Tape &t = *a.tape();
  const Matrix &x = a.value();
  ColVector norms = x.rowwise().norm();
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (!(norms(i) > 0.0))
      throw ValueError("row_normalize: row " + std::to_string(i) +
                       " has zero norm");
  Matrix y = x.array().colwise() / norms.array();
  const int ia = a.id();
  Matrix ycopy = y;
  return t.push(std::move(y), t.needs_grad(ia),
                [ia, ycopy = std::move(ycopy),
                 norms = std::move(norms)](Tape &t, const Matrix &g) {
                  ColVector dot = g.cwiseProduct(ycopy).rowwise().sum();
                  Matrix gx = (g - (ycopy.array().colwise() * dot.array())
                                       .matrix())
                                  .array()
                                  .colwise()
                              / norms.array();
                  t.grad(ia) += gx;
                });
}

Var vector_norms(Var v) {
  Tape &t = *v.tape();
  const Matrix &x = v.value();
  if (x.rows() % 3 != 0)
    throw DimensionError("vector_norms: stacked vectors need 3N rows");
  const Eigen::Index n = x.rows() / 3;
  Matrix y = (x.topRows(n).array().square()
              + x.middleRows(n, n).array().square()
              + x.bottomRows(n).array().square())
                 .sqrt()
                 .matrix();
  const int iv = v.id();
  Matrix ycopy = y;
  return t.push(std::move(y), t.needs_grad(iv),
                [iv, n, ycopy = std::move(ycopy)](Tape &t, const Matrix &g) {
                  Matrix coef = (ycopy.array() > 0.0)
                                    .select(g.array() / ycopy.array(), 0.0)
                                    .matrix();
                  const Matrix &x = t.value(iv);
                  Matrix &gv = t.grad(iv);
                  for (int b = 0; b < 3; ++b)
                    gv.middleRows(b * n, n) +=
                        coef.cwiseProduct(x.middleRows(b * n, n));
                });
}

Var vector_gate(Var v, Var gate) {
  Tape &t = same_tape(v, gate);
  const Matrix &x = v.value();
  const Eigen::Index n = gate.rows();
  if (x.rows() != 3 * n || x.cols() != gate.cols())
    throw DimensionError("vector_gate: gate must be N x c for 3N x c vectors");
  Matrix y(x.rows(), x.cols());
  for (int b = 0; b < 3; ++b)
    y.middleRows(b * n, n) = x.middleRows(b * n, n).cwiseProduct(gate.value());
  const int iv = v.id(), ig = gate.id();
  return t.push(std::move(y), any_grad(t, {iv, ig}),
                [iv, ig, n](Tape &t, const Matrix &g) {
                  if (t.needs_grad(iv)) {
                    Matrix &gv = t.grad(iv);
                    for (int b = 0; b < 3; ++b)
                      gv.middleRows(b * n, n) +=
                          g.middleRows(b * n, n).cwiseProduct(t.value(ig));
                  }
                  if (t.needs_grad(ig)) {
                    const Matrix &x = t.value(iv);
                    Matrix &gg = t.grad(ig);
                    for (int b = 0; b < 3; ++b)
                      gg += g.middleRows(b * n, n).cwiseProduct(
                          x.middleRows(b * n, n));
                  }
                });
}

Var vector_layer_norm(Var v) {
  Tape &t = *v.tape();
  const Matrix &x = v.value();
  if (x.rows() % 3 != 0)
    throw DimensionError("vector_layer_norm: stacked vectors need 3N rows");
  const Eigen::Index n = x.rows() / 3;
  const double c = static_cast<double>(x.cols());
  ColVector rms(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sq = 0.0;
    for (int b = 0; b < 3; ++b)
      sq += x.row(b * n + i).squaredNorm();
    rms(i) = std::sqrt(sq / c);
  }
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    if (rms(i) > 0.0)
      for (int b = 0; b < 3; ++b)
        y.row(b * n + i) = x.row(b * n + i) / rms(i);
  const int iv = v.id();
  return t.push(std::move(y), t.needs_grad(iv),
                [iv, n, c, rms = std::move(rms)](Tape &t, const Matrix &g) {
                  const Matrix &x = t.value(iv);
                  Matrix &gv = t.grad(iv);
                  for (Eigen::Index i = 0; i < n; ++i) {
                    if (!(rms(i) > 0.0))
                      continue;
                    double dot = 0.0;
                    for (int b = 0; b < 3; ++b)
                      dot += g.row(b * n + i).dot(x.row(b * n + i));
                    const double r = rms(i);
                    for (int b = 0; b < 3; ++b)
                      gv.row(b * n + i) += g.row(b * n + i) / r
                                           - x.row(b * n + i)
                                                 * (dot / (c * r * r * r));
                  }
                });
}

Var masked_nce(Var logits, std::vector<int> positive, std::vector<bool> valid,
               double coef) {
  Tape &t = *logits.tape();
  const Matrix &x = logits.value();
  const Eigen::Index rows = x.rows(), cols = x.cols();
  if (static_cast<Eigen::Index>(positive.size()) != rows
      || static_cast<Eigen::Index>(valid.size()) != rows * cols)
    throw DimensionError("masked_nce: positive/valid sizes do not match");
  Matrix soft = Matrix::Zero(rows, cols);
  double total = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const int p = positive[i];
    if (p < 0 || p >= cols || !valid[i * cols + p])
      throw ValueError("masked_nce: positive entry must be valid");
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < cols; ++j)
      if (valid[i * cols + j])
        mx = std::max(mx, x(i, j));
    double z = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (valid[i * cols + j]) {
        soft(i, j) = std::exp(x(i, j) - mx);
        z += soft(i, j);
      }
    soft.row(i) /= z;
    total += mx + std::log(z) - x(i, p);
  }
  Matrix y(1, 1);
  y(0, 0) = coef * total;
  const int il = logits.id();
  for (Eigen::Index i = 0; i < rows; ++i)
    soft(i, positive[i]) -= 1.0;
  return t.push(std::move(y), t.needs_grad(il),
                [il, coef, soft = std::move(soft)](Tape &t, const Matrix &g) {
                  t.grad(il) += (g(0, 0) * coef) * soft;
                });
}

Var bce(Var p, std::span<const double> labels, double eps) {
  Tape &t = *p.tape();
  const Matrix &x = p.value();
  if (x.cols() != 1
      || x.rows() != static_cast<Eigen::Index>(labels.size()))
    throw DimensionError("bce: " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + " probabilities");
  if (labels.empty())
    throw DimensionError("bce: empty batch");
  const double n = static_cast<double>(labels.size());
  Matrix dx(x.rows(), 1);
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double y = labels[i];
    const double raw = x(i, 0);
    const double pc = std::clamp(raw, eps, 1.0 - eps);
    total += y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
    const bool clamped = raw < eps || raw > 1.0 - eps;
    dx(i, 0) = clamped ? 0.0 : -(y / pc - (1.0 - y) / (1.0 - pc)) / n;
  }
  Matrix out(1, 1);
  out(0, 0) = -total / n;
  const int ip = p.id();
  return t.push(std::move(out), t.needs_grad(ip),
                [ip, dx = std::move(dx)](Tape &t, const Matrix &g) {
                  t.grad(ip) += g(0, 0) * dx;
                });
}

Var dropout(Var a, double p) {
  Tape &t = *a.tape();
  if (!t.training() || p <= 0.0)
    return a;
  if (p >= 1.0)
    throw ValueError("dropout probability must be < 1");
  if (t.rng() == nullptr)
    throw ValueError("dropout in training mode needs an RNG");
  std::bernoulli_distribution keep(1.0 - p);
  Matrix mask(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i)
    mask.data()[i] = keep(*t.rng()) ? 1.0 / (1.0 - p) : 0.0;
  return mul(a, t.constant(std::move(mask)));
}

} // namespace tridti::ag
