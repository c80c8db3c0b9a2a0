//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/geometric.hpp"

#include <algorithm>

#include "tridti/error.hpp"

namespace tridti {

Gvp::Gvp(ParamStore &store, const std::string &prefix, GvpDims in,
         GvpDims out, bool activations, Rng &rng)
    : in_(in), out_(out), activations_(activations) {
  if (in.vectors < 1 || out.vectors < 1 || out.scalars < 1 || in.scalars < 0)
    throw ValueError("gvp: needs at least one vector channel on each side");
  const int h = std::max(in.vectors, out.vectors);
  wh_ = &store.create(prefix + ".wh", in.vectors, h, Init::kXavier, rng);
  wu_ = &store.create(prefix + ".wu", h, out.vectors, Init::kXavier, rng);
  wv_ = &store.create(prefix + ".wv", h + in.scalars, out.scalars,
                      Init::kXavier, rng);
  b_ = &store.create(prefix + ".b", 1, out.scalars, Init::kZeros, rng);
}

GeoFeatures Gvp::operator()(ag::Tape &tape, const GeoFeatures &x) const {
  const Eigen::Index n = x.v.rows() / 3;
  if (x.v.rows() != 3 * n || x.v.cols() != in_.vectors
      || x.s.cols() != in_.scalars || x.s.rows() != n)
    throw DimensionError("gvp: expected " + std::to_string(in_.scalars) +
                         " scalar and " + std::to_string(in_.vectors) +
                         " vector channels");
  ag::Var vh = ag::matmul(x.v, tape.param(*wh_));
  ag::Var vu = ag::matmul(vh, tape.param(*wu_));
  ag::Var norms = ag::vector_norms(vh);
  ag::Var cat = in_.scalars == 0
                    ? norms
                    : ag::concat_cols(std::vector<ag::Var>{norms, x.s});
  ag::Var s = ag::add_bias(ag::matmul(cat, tape.param(*wv_)),
                           tape.param(*b_));
  if (!activations_)
    return {s, vu};
  return {ag::relu(s), ag::vector_gate(vu, ag::sigmoid(ag::vector_norms(vu)))};
}

ag::Var gather_vectors(ag::Var v, const std::vector<int> &index,
                       Eigen::Index num_nodes) {
  std::vector<int> rows;
  rows.reserve(3 * index.size());
  for (int axis = 0; axis < 3; ++axis)
    for (int i : index)
      rows.push_back(static_cast<int>(axis * num_nodes + i));
  return ag::gather_rows(v, std::move(rows));
}

GvpConv::GvpConv(ParamStore &store, const std::string &prefix, GvpDims node,
                 GvpDims edge, Rng &rng)
    : node_(node), edge_(edge) {
  const GvpDims in{node.scalars + edge.scalars, node.vectors + edge.vectors};
  g_.emplace_back(store, prefix + ".msg0", in, node, true, rng);
  g_.emplace_back(store, prefix + ".msg1", node, node, true, rng);
  g_.emplace_back(store, prefix + ".msg2", node, node, false, rng);
  ln_g_ = &store.create(prefix + ".ln.gamma", 1, node.scalars, Init::kOnes,
                        rng);
  ln_b_ = &store.create(prefix + ".ln.beta", 1, node.scalars, Init::kZeros,
                        rng);
}

GeoFeatures GvpConv::messages(ag::Tape &tape, const GeoFeatures &nodes,
                              const std::vector<Edge> &edges,
                              const GeoFeatures &edge_features) const {
  const Eigen::Index n = nodes.s.rows();
  const auto e = static_cast<Eigen::Index>(edges.size());
  if (edge_features.s.rows() != e || edge_features.v.rows() != 3 * e
      || edge_features.s.cols() != edge_.scalars
      || edge_features.v.cols() != edge_.vectors)
    throw DimensionError("gvp conv: edge features do not match the edges");
  std::vector<int> src;
  src.reserve(edges.size());
  for (auto [j, i] : edges) {
    if (j < 0 || j >= n || i < 0 || i >= n)
      throw BoundsError("gvp conv: edge outside the graph");
    src.push_back(j);
  }
  GeoFeatures m{
      ag::concat_cols(std::vector<ag::Var>{ag::gather_rows(nodes.s, src),
                                           edge_features.s}),
      ag::concat_cols(std::vector<ag::Var>{gather_vectors(nodes.v, src, n),
                                           edge_features.v})};
  for (const Gvp &g : g_)
    m = g(tape, m);
  return m;
}

GeoFeatures GvpConv::update(ag::Tape &tape, const GeoFeatures &nodes,
                            const GeoFeatures &messages,
                            const std::vector<Edge> &edges) const {
  const Eigen::Index n = nodes.s.rows();
  ag::Var s = nodes.s, v = nodes.v;
  if (!edges.empty()) {
    std::vector<int> in_degree(n, 0);
    for (auto [j, i] : edges) {
      (void)j;
      ++in_degree[i];
    }
    std::vector<int> dst;
    std::vector<double> w;
    for (auto [j, i] : edges) {
      (void)j;
      dst.push_back(i);
      w.push_back(1.0 / in_degree[i]);
    }
    std::vector<int> vdst;
    std::vector<double> vw;
    for (int axis = 0; axis < 3; ++axis)
      for (std::size_t k = 0; k < dst.size(); ++k) {
        vdst.push_back(static_cast<int>(axis * n + dst[k]));
        vw.push_back(w[k]);
      }
    s = ag::add(s, ag::scatter_add_rows(messages.s, dst, n, w));
    v = ag::add(v, ag::scatter_add_rows(messages.v, vdst, 3 * n, vw));
  }
  return {ag::layer_norm(s, tape.param(*ln_g_), tape.param(*ln_b_)),
          ag::vector_layer_norm(v)};
}

GeoFeatures GvpConv::operator()(ag::Tape &tape, const GeoFeatures &nodes,
                                const std::vector<Edge> &edges,
                                const GeoFeatures &edge_features) const {
  if (edges.empty())
    return update(tape, nodes, {}, edges);
  return update(tape, nodes, messages(tape, nodes, edges, edge_features),
                edges);
}

void GeometricParams::validate() const {
  if (scalar_hidden < 1 || vector_hidden < 1 || num_layers < 0)
    throw ValueError("geometric encoder: widths must be >= 1, layers >= 0");
}

GeometricEncoder::GeometricEncoder(ParamStore &store,
                                   const std::string &prefix,
                                   const GeometricParams &params, int out_dim,
                                   Rng &rng)
    : params_((params.validate(), params)),
      input_(store, prefix + ".input", {kNodeScalarDim, kNodeVectorDim},
             {params.scalar_hidden, params.vector_hidden}, false, rng) {
  const GvpDims node{params.scalar_hidden, params.vector_hidden};
  const GvpDims edge{kEdgeScalarDim, kEdgeVectorDim};
  for (int l = 0; l < params.num_layers; ++l)
    layers_.emplace_back(store, prefix + ".conv" + std::to_string(l), node,
                         edge, rng);
  out_w_ = &store.create(prefix + ".out.w", params.scalar_hidden, out_dim,
                         Init::kXavier, rng);
  out_b_ = &store.create(prefix + ".out.b", 1, out_dim, Init::kZeros, rng);
}

ag::Var GeometricEncoder::forward(ag::Tape &tape,
                                  const Molecular3DGraph &graph,
                                  std::vector<Matrix> *trace) const {
  if (graph.num_atoms() < 1)
    throw ValueError("geometric encoder: graph has no atoms");
  GeoFeatures x{tape.constant(graph.node_scalars),
                tape.constant(graph.node_vectors)};
  GeoFeatures e{tape.constant(graph.edge_scalars),
                tape.constant(graph.edge_vectors)};
  x = input_(tape, x);
  if (trace)
    trace->push_back(x.v.value());
  for (const GvpConv &conv : layers_) {
    x = conv(tape, x, graph.edges, e);
    if (trace)
      trace->push_back(x.v.value());
  }
  return ag::add_bias(ag::matmul(ag::sum_rows(x.s), tape.param(*out_w_)),
                      tape.param(*out_b_));
}

} // namespace tridti
