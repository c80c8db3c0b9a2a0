//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Geometric vector perceptrons and GVP-GNN message passing over the 3D
// molecular graph.
//
// One GVP maps (s, V) with s scalar channels and V vector channels to
// (s', V'):
//   Vh = V Wh,  Vu = Vh Wu
//   s' = relu([ |Vh| , s ] Wv + b)
//   V' = sigmoid(|Vu|) * Vu      (gated per output channel by its own norm)
// Channel mixing never touches the spatial axis, so V' rotates with V and
// s' is invariant. Vector tensors use the stacked layout of autograd.hpp.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tridti/autograd.hpp"
#include "tridti/ingest.hpp"
#include "tridti/params.hpp"

namespace tridti {

struct GvpDims {
  int scalars = 0;
  int vectors = 0;
};

// Scalar and vector features of N nodes: s (N x ns), v (3N x nv).
struct GeoFeatures {
  ag::Var s;
  ag::Var v;
};

class Gvp {
public:
  // hidden vector width is max(in.vectors, out.vectors).
  Gvp(ParamStore &store, const std::string &prefix, GvpDims in, GvpDims out,
      bool activations, Rng &rng);

  GeoFeatures operator()(ag::Tape &tape, const GeoFeatures &x) const;

  GvpDims in() const { return in_; }
  GvpDims out() const { return out_; }

private:
  GvpDims in_, out_;
  bool activations_;
  ag::Parameter *wh_, *wu_, *wv_, *b_;
};

// Rows of a stacked (3N x c) tensor for the given node indices.
ag::Var gather_vectors(ag::Var v, const std::vector<int> &index,
                       Eigen::Index num_nodes);

// One message-passing layer: messages g([s_j, e_s], [V_j, e_V]) over the
// edges j -> i, mean over the incoming edges (zero when none), residual,
// then layer normalization (affine LayerNorm on scalars, RMS-of-norms on
// vectors).
class GvpConv {
public:
  GvpConv(ParamStore &store, const std::string &prefix, GvpDims node,
          GvpDims edge, Rng &rng);

  // Messages of every edge (E x ns, 3E x nv).
  GeoFeatures messages(ag::Tape &tape, const GeoFeatures &nodes,
                       const std::vector<Edge> &edges,
                       const GeoFeatures &edge_features) const;
  GeoFeatures operator()(ag::Tape &tape, const GeoFeatures &nodes,
                         const std::vector<Edge> &edges,
                         const GeoFeatures &edge_features) const;

  // Residual + normalization step with precomputed messages.
  GeoFeatures update(ag::Tape &tape, const GeoFeatures &nodes,
                     const GeoFeatures &messages,
                     const std::vector<Edge> &edges) const;

private:
  GvpDims node_, edge_;
  std::vector<Gvp> g_;
  ag::Parameter *ln_g_, *ln_b_;
};

struct GeometricParams {
  int scalar_hidden = 64;
  int vector_hidden = 16;
  int num_layers = 3;

  void validate() const;
};

// Input GVP, message-passing layers, sum of node scalars over the graph,
// linear map to out_dim.
class GeometricEncoder {
public:
  GeometricEncoder(ParamStore &store, const std::string &prefix,
                   const GeometricParams &params, int out_dim, Rng &rng);

  // When `trace` is given, the vector channels after the input GVP and after
  // every layer are appended to it (values only).
  ag::Var forward(ag::Tape &tape, const Molecular3DGraph &graph,
                  std::vector<Matrix> *trace = nullptr) const;

  const GeometricParams &params() const { return params_; }

private:
  GeometricParams params_;
  Gvp input_;
  std::vector<GvpConv> layers_;
  ag::Parameter *out_w_, *out_b_;
};

} // namespace tridti
