//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Topological graph encoders: GCN (drug 2D graph, residue contact graph) and
// TAGCN with gated attention pooling (binding pockets).
//
// GCN layer:   relu(D~^-1/2 (A + I) D~^-1/2 Z W + b)
// TAGCN layer: relu(sum_{k=1..K} (D^-1/2 A D^-1/2)^k X W_k + b), no
//              self-loops; a node of degree zero gets D^-1/2 = 0.

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tridti/autograd.hpp"
#include "tridti/params.hpp"
#include "tridti/structure.hpp"

namespace tridti {

using Propagation = std::shared_ptr<const SparseMatrix>;

// Dense references. `a_tilde` must already carry self-loops.
Matrix gcn_normalize(const Matrix &a_tilde);
Matrix gcn_layer(const Matrix &a_tilde, const Matrix &z, const Matrix &w,
                 const RowVector &b);
Matrix tagcn_normalize(const Matrix &a);
Matrix tagcn_layer(const Matrix &a, const Matrix &x,
                   const std::vector<Matrix> &hop_weights, const RowVector &b);
// sum_i sigmoid(x_i . gate_w + gate_b) * (x_i T + t_b)
RowVector attention_pool(const Matrix &x, const ColVector &gate_w,
                         double gate_b, const Matrix &transform_w,
                         const RowVector &transform_b);

// Sparse propagation operators from an edge list. Either or both directions
// of an edge may be listed; duplicates collapse to weight 1.
Propagation gcn_propagation(int num_nodes,
                            const std::vector<std::pair<int, int>> &edges);
Propagation tagcn_propagation(int num_nodes,
                              const std::vector<std::pair<int, int>> &edges);

struct GcnParams {
  int hidden_dim = 128;  // D_a
  int num_layers = 2;
  double dropout = 0.2;

  void validate() const;
};

struct TagcnParams {
  int hidden_dim = 64;
  int num_layers = 2;
  int hops = 2;  // K
  double dropout = 0.2;

  void validate() const;
};

// in_dim -> D_a projection, GCN layers, mean over nodes, D_a -> out_dim.
class GcnEncoder {
public:
  GcnEncoder(ParamStore &store, const std::string &prefix, int in_dim,
             const GcnParams &params, int out_dim, Rng &rng);

  // Node embeddings after the last GCN layer (N x D_a).
  ag::Var nodes(ag::Tape &tape, const Matrix &features,
                const Propagation &prop) const;
  ag::Var forward(ag::Tape &tape, const Matrix &features,
                  const Propagation &prop) const;

  const GcnParams &params() const { return params_; }

private:
  GcnParams params_;
  int in_dim_;
  ag::Parameter *in_w_, *in_b_;
  std::vector<std::pair<ag::Parameter *, ag::Parameter *>> layers_;
  ag::Parameter *out_w_, *out_b_;
};

struct PreparedPocket {
  Matrix features;  // M x 31
  Propagation prop;
};

PreparedPocket prepare_pocket(const PocketGraph &pocket);

// Per pocket: TAGCN layers then attention pooling. Pocket vectors are
// averaged and mapped to out_dim by one fully connected layer.
class PocketEncoder {
public:
  PocketEncoder(ParamStore &store, const std::string &prefix, int in_dim,
                const TagcnParams &params, int out_dim, Rng &rng);

  // Pooled vector of one pocket (1 x hidden).
  ag::Var pocket_vector(ag::Tape &tape, const PreparedPocket &pocket) const;
  ag::Var forward(ag::Tape &tape,
                  const std::vector<PreparedPocket> &pockets) const;

  const TagcnParams &params() const { return params_; }

private:
  struct Layer {
    std::vector<ag::Parameter *> hop_w;
    ag::Parameter *b;
  };

  TagcnParams params_;
  int in_dim_;
  std::vector<Layer> layers_;
  ag::Parameter *gate_w_, *gate_b_, *tr_w_, *tr_b_;
  ag::Parameter *out_w_, *out_b_;
};

} // namespace tridti
