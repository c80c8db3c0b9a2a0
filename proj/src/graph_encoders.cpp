//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/graph_encoders.hpp"

#include <cmath>
#include <set>

#include "tridti/error.hpp"

namespace tridti {

namespace {

void require_square(const Matrix &a, Eigen::Index n, const char *what) {
  if (a.rows() != a.cols() || a.rows() != n)
    throw DimensionError(std::string(what) + ": adjacency is " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected " +
                         std::to_string(n) + "x" + std::to_string(n));
}

ColVector inv_sqrt_degree(const Matrix &a) {
  ColVector d = a.rowwise().sum();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  return d;
}

std::set<std::pair<int, int>> undirected(int n,
                                         const std::vector<std::pair<int, int>>
                                             &edges) {
  std::set<std::pair<int, int>> out;
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw BoundsError("graph edge (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") outside " + std::to_string(n) +
                        " nodes");
    if (i == j)
      continue;
    out.emplace(i, j);
    out.emplace(j, i);
  }
  return out;
}

Propagation normalized(int n, const std::set<std::pair<int, int>> &entries) {
  std::vector<double> deg(n, 0.0);
  for (auto [i, j] : entries) {
    (void)j;
    deg[i] += 1.0;
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(entries.size());
  for (auto [i, j] : entries)
    trip.emplace_back(i, j, 1.0 / std::sqrt(deg[i] * deg[j]));
  auto s = std::make_shared<SparseMatrix>(n, n);
  s->setFromTriplets(trip.begin(), trip.end());
  return s;
}

} // namespace

Matrix gcn_normalize(const Matrix &a_tilde) {
  require_square(a_tilde, a_tilde.rows(), "gcn");
  ColVector d = inv_sqrt_degree(a_tilde);
  return d.asDiagonal() * a_tilde * d.asDiagonal();
}

Matrix gcn_layer(const Matrix &a_tilde, const Matrix &z, const Matrix &w,
                 const RowVector &b) {
  require_square(a_tilde, z.rows(), "gcn_layer");
  if (z.cols() != w.rows() || b.size() != w.cols())
    throw DimensionError("gcn_layer: weight shapes do not match features");
  Matrix h = gcn_normalize(a_tilde) * z * w;
  h.rowwise() += b;
  return h.cwiseMax(0.0);
}

Matrix tagcn_normalize(const Matrix &a) {
  require_square(a, a.rows(), "tagcn");
  ColVector d = inv_sqrt_degree(a);
  return d.asDiagonal() * a * d.asDiagonal();
}

Matrix tagcn_layer(const Matrix &a, const Matrix &x,
                   const std::vector<Matrix> &hop_weights,
                   const RowVector &b) {
  require_square(a, x.rows(), "tagcn_layer");
  if (hop_weights.empty())
    throw ValueError("tagcn_layer: K must be >= 1");
  const Matrix p = tagcn_normalize(a);
  Matrix h = Matrix::Zero(x.rows(), b.size());
  Matrix xk = x;
  for (const Matrix &w : hop_weights) {
    if (w.rows() != x.cols() || w.cols() != b.size())
      throw DimensionError("tagcn_layer: hop weight shape mismatch");
    xk = p * xk;
    h += xk * w;
  }
  h.rowwise() += b;
  return h.cwiseMax(0.0);
}

RowVector attention_pool(const Matrix &x, const ColVector &gate_w,
                         double gate_b, const Matrix &transform_w,
                         const RowVector &transform_b) {
  if (x.rows() < 1)
    throw ValueError("attention_pool: no nodes");
  if (gate_w.size() != x.cols() || transform_w.rows() != x.cols()
      || transform_b.size() != transform_w.cols())
    throw DimensionError("attention_pool: parameter shapes do not match");
  ColVector logits = (x * gate_w).array() + gate_b;
  ColVector g = (1.0 / (1.0 + (-logits.array()).exp())).matrix();
  Matrix t = x * transform_w;
  t.rowwise() += transform_b;
  return g.transpose() * t;
}

Propagation gcn_propagation(int num_nodes,
                            const std::vector<std::pair<int, int>> &edges) {
  auto entries = undirected(num_nodes, edges);
  for (int i = 0; i < num_nodes; ++i)
    entries.emplace(i, i);
  return normalized(num_nodes, entries);
}

Propagation tagcn_propagation(int num_nodes,
                              const std::vector<std::pair<int, int>> &edges) {
  return normalized(num_nodes, undirected(num_nodes, edges));
}

void GcnParams::validate() const {
  if (hidden_dim < 1 || num_layers < 1)
    throw ValueError("gcn: hidden_dim and num_layers must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0))
    throw ValueError("gcn: dropout must lie in [0, 1)");
}

void TagcnParams::validate() const {
  if (hidden_dim < 1 || num_layers < 1 || hops < 1)
    throw ValueError("tagcn: hidden_dim, num_layers and hops must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0))
    throw ValueError("tagcn: dropout must lie in [0, 1)");
}

GcnEncoder::GcnEncoder(ParamStore &store, const std::string &prefix,
                       int in_dim, const GcnParams &params, int out_dim,
                       Rng &rng)
    : params_(params), in_dim_(in_dim) {
  params_.validate();
  const int h = params.hidden_dim;
  in_w_ = &store.create(prefix + ".in.w", in_dim, h, Init::kXavier, rng);
  in_b_ = &store.create(prefix + ".in.b", 1, h, Init::kZeros, rng);
  for (int l = 0; l < params.num_layers; ++l) {
    const std::string p = prefix + ".gcn" + std::to_string(l);
    layers_.emplace_back(&store.create(p + ".w", h, h, Init::kXavier, rng),
                         &store.create(p + ".b", 1, h, Init::kZeros, rng));
  }
  out_w_ = &store.create(prefix + ".out.w", h, out_dim, Init::kXavier, rng);
  out_b_ = &store.create(prefix + ".out.b", 1, out_dim, Init::kZeros, rng);
}

ag::Var GcnEncoder::nodes(ag::Tape &tape, const Matrix &features,
                          const Propagation &prop) const {
  if (features.rows() < 1)
    throw ValueError("gcn encoder: graph has no nodes");
  if (features.cols() != in_dim_)
    throw DimensionError("gcn encoder: expected " + std::to_string(in_dim_) +
                         " feature columns, got " +
                         std::to_string(features.cols()));
  if (!prop || prop->rows() != features.rows())
    throw DimensionError("gcn encoder: propagation does not match the graph");
  ag::Var z = ag::add_bias(ag::matmul(tape.constant(features),
                                      tape.param(*in_w_)),
                           tape.param(*in_b_));
  for (auto [w, b] : layers_) {
    z = ag::relu(ag::add_bias(ag::spmm(prop, ag::matmul(z, tape.param(*w))),
                              tape.param(*b)));
    z = ag::dropout(z, params_.dropout);
  }
  return z;
}

ag::Var GcnEncoder::forward(ag::Tape &tape, const Matrix &features,
                            const Propagation &prop) const {
  ag::Var pooled = ag::mean_rows(nodes(tape, features, prop));
  return ag::add_bias(ag::matmul(pooled, tape.param(*out_w_)),
                      tape.param(*out_b_));
}

PreparedPocket prepare_pocket(const PocketGraph &pocket) {
  if (pocket.num_atoms() < 1)
    throw ValueError("pocket graph has no atoms");
  return {pocket.node_features,
          tagcn_propagation(pocket.num_atoms(), pocket.edges)};
}

PocketEncoder::PocketEncoder(ParamStore &store, const std::string &prefix,
                             int in_dim, const TagcnParams &params,
                             int out_dim, Rng &rng)
    : params_(params), in_dim_(in_dim) {
  params_.validate();
  const int h = params.hidden_dim;
  int width = in_dim;
  for (int l = 0; l < params.num_layers; ++l) {
    const std::string p = prefix + ".tagcn" + std::to_string(l);
    Layer L;
    for (int k = 1; k <= params.hops; ++k)
      L.hop_w.push_back(&store.create(p + ".w" + std::to_string(k), width, h,
                                      Init::kXavier, rng));
    L.b = &store.create(p + ".b", 1, h, Init::kZeros, rng);
    layers_.push_back(std::move(L));
    width = h;
  }
  gate_w_ = &store.create(prefix + ".gate.w", h, 1, Init::kXavier, rng);
  gate_b_ = &store.create(prefix + ".gate.b", 1, 1, Init::kZeros, rng);
  tr_w_ = &store.create(prefix + ".transform.w", h, h, Init::kXavier, rng);
  tr_b_ = &store.create(prefix + ".transform.b", 1, h, Init::kZeros, rng);
  out_w_ = &store.create(prefix + ".out.w", h, out_dim, Init::kXavier, rng);
  out_b_ = &store.create(prefix + ".out.b", 1, out_dim, Init::kZeros, rng);
}

ag::Var PocketEncoder::pocket_vector(ag::Tape &tape,
                                     const PreparedPocket &pocket) const {
  if (pocket.features.rows() < 1)
    throw ValueError("pocket encoder: pocket has no atoms");
  if (pocket.features.cols() != in_dim_)
    throw DimensionError("pocket encoder: expected " +
                         std::to_string(in_dim_) + " feature columns");
  if (!pocket.prop || pocket.prop->rows() != pocket.features.rows())
    throw DimensionError("pocket encoder: propagation does not match");
  ag::Var x = tape.constant(pocket.features);
  for (const Layer &L : layers_) {
    ag::Var xk = x;
    ag::Var h;
    for (ag::Parameter *w : L.hop_w) {
      xk = ag::spmm(pocket.prop, xk);
      ag::Var term = ag::matmul(xk, tape.param(*w));
      h = h.valid() ? ag::add(h, term) : term;
    }
    x = ag::relu(ag::add_bias(h, tape.param(*L.b)));
    x = ag::dropout(x, params_.dropout);
  }
  ag::Var gate = ag::sigmoid(ag::add_bias(ag::matmul(x, tape.param(*gate_w_)),
                                          tape.param(*gate_b_)));
  ag::Var t = ag::add_bias(ag::matmul(x, tape.param(*tr_w_)),
                           tape.param(*tr_b_));
  return ag::sum_rows(ag::mul_colwise(t, gate));
}

ag::Var PocketEncoder::forward(ag::Tape &tape,
                               const std::vector<PreparedPocket> &pockets)
    const {
  if (pockets.empty())
    throw ValueError("pocket encoder: protein has no pockets");
  std::vector<ag::Var> rows;
  rows.reserve(pockets.size());
  for (const PreparedPocket &p : pockets)
    rows.push_back(pocket_vector(tape, p));
  ag::Var mean = rows.size() == 1 ? rows[0]
                                  : ag::mean_rows(ag::concat_rows(rows));
  return ag::add_bias(ag::matmul(mean, tape.param(*out_w_)),
                      tape.param(*out_b_));
}

} // namespace tridti
