//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/sequence_encoder.hpp"

#include <cmath>

#include "tridti/error.hpp"

namespace tridti {

void TransformerParams::validate() const {
  if (num_layers < 0)
    throw ValueError("transformer: num_layers must be >= 0");
  if (num_heads < 1 || model_dim < 1 || model_dim % num_heads != 0)
    throw ValueError("transformer: model_dim must be a positive multiple of "
                     "num_heads");
  if (feedforward_dim < 1)
    throw ValueError("transformer: feedforward_dim must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0))
    throw ValueError("transformer: dropout must lie in [0, 1)");
}

std::vector<bool> valid_mask(const TokenSequence &tokens) {
  std::vector<bool> v(tokens.ids.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = tokens.ids[i] != kPadId;
  return v;
}

SequenceEncoder::SequenceEncoder(ParamStore &store, const std::string &prefix,
                                 int vocab_size, int max_len,
                                 const TransformerParams &params, int out_dim,
                                 Rng &rng)
    : params_(params), max_len_(max_len) {
  params_.validate();
  const int d = params.model_dim, f = params.feedforward_dim;
  content_ = &store.create(prefix + ".content", vocab_size, d, Init::kNormal,
                           rng);
  position_ = &store.create(prefix + ".position", max_len, d, Init::kNormal,
                            rng);
  for (int l = 0; l < params.num_layers; ++l) {
    const std::string p = prefix + ".layer" + std::to_string(l);
    Layer L;
    L.ln1_g = &store.create(p + ".ln1.gamma", 1, d, Init::kOnes, rng);
    L.ln1_b = &store.create(p + ".ln1.beta", 1, d, Init::kZeros, rng);
    L.wq = &store.create(p + ".wq", d, d, Init::kXavier, rng);
    L.bq = &store.create(p + ".bq", 1, d, Init::kZeros, rng);
    L.wk = &store.create(p + ".wk", d, d, Init::kXavier, rng);
    L.bk = &store.create(p + ".bk", 1, d, Init::kZeros, rng);
    L.wv = &store.create(p + ".wv", d, d, Init::kXavier, rng);
    L.bv = &store.create(p + ".bv", 1, d, Init::kZeros, rng);
    L.wo = &store.create(p + ".wo", d, d, Init::kXavier, rng);
    L.bo = &store.create(p + ".bo", 1, d, Init::kZeros, rng);
    L.ln2_g = &store.create(p + ".ln2.gamma", 1, d, Init::kOnes, rng);
    L.ln2_b = &store.create(p + ".ln2.beta", 1, d, Init::kZeros, rng);
    L.w1 = &store.create(p + ".ff1.w", d, f, Init::kXavier, rng);
    L.b1 = &store.create(p + ".ff1.b", 1, f, Init::kZeros, rng);
    L.w2 = &store.create(p + ".ff2.w", f, d, Init::kXavier, rng);
    L.b2 = &store.create(p + ".ff2.b", 1, d, Init::kZeros, rng);
    layers_.push_back(L);
  }
  final_g_ = &store.create(prefix + ".final_ln.gamma", 1, d, Init::kOnes, rng);
  final_b_ = &store.create(prefix + ".final_ln.beta", 1, d, Init::kZeros, rng);
  proj_w_ = &store.create(prefix + ".proj.w", d, out_dim, Init::kXavier, rng);
  proj_b_ = &store.create(prefix + ".proj.b", 1, out_dim, Init::kZeros, rng);
}

ag::Var SequenceEncoder::embed(ag::Tape &tape,
                               const TokenSequence &tokens) const {
  if (tokens.length() < 1)
    throw ValueError("sequence encoder: empty token sequence");
  if (tokens.length() > max_len_)
    throw BoundsError("sequence encoder: " + std::to_string(tokens.length()) +
                      " tokens exceed max_len " + std::to_string(max_len_));
  for (int id : tokens.ids)
    if (id < 0 || id >= content_->value.rows())
      throw BoundsError("sequence encoder: token id " + std::to_string(id) +
                        " outside the vocabulary");
  ag::Var content = ag::gather_rows(tape.param(*content_), tokens.ids);
  ag::Var position =
      ag::slice_rows(tape.param(*position_), 0, tokens.length());
  return ag::add(content, position);
}

ag::Var SequenceEncoder::attention(ag::Tape &tape, const Layer &L, ag::Var x,
                                   const std::vector<bool> &valid) const {
  const int heads = params_.num_heads;
  const int dk = params_.model_dim / heads;
  ag::Var q = ag::add_bias(ag::matmul(x, tape.param(*L.wq)), tape.param(*L.bq));
  ag::Var k = ag::add_bias(ag::matmul(x, tape.param(*L.wk)), tape.param(*L.bk));
  ag::Var v = ag::add_bias(ag::matmul(x, tape.param(*L.wv)), tape.param(*L.bv));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  std::vector<ag::Var> outs;
  for (int h = 0; h < heads; ++h) {
    ag::Var qh = ag::slice_cols(q, h * dk, dk);
    ag::Var kh = ag::slice_cols(k, h * dk, dk);
    ag::Var vh = ag::slice_cols(v, h * dk, dk);
    ag::Var scores = ag::scale(ag::matmul_nt(qh, kh), scale);
    ag::Var attn = ag::softmax_rows(scores, valid);
    outs.push_back(ag::matmul(attn, vh));
  }
  ag::Var cat = heads == 1 ? outs[0] : ag::concat_cols(outs);
  return ag::add_bias(ag::matmul(cat, tape.param(*L.wo)), tape.param(*L.bo));
}

ag::Var SequenceEncoder::encode(ag::Tape &tape, ag::Var x,
                                const std::vector<bool> &valid) const {
  if (static_cast<Eigen::Index>(valid.size()) != x.rows())
    throw DimensionError("sequence encoder: mask length differs from input");
  bool any = false;
  for (bool b : valid)
    any = any || b;
  if (!any)
    throw ValueError("sequence encoder: every position is masked");
  for (const Layer &L : layers_) {
    ag::Var h = ag::layer_norm(x, tape.param(*L.ln1_g), tape.param(*L.ln1_b));
    x = ag::add(x, ag::dropout(attention(tape, L, h, valid), params_.dropout));
    h = ag::layer_norm(x, tape.param(*L.ln2_g), tape.param(*L.ln2_b));
    h = ag::relu(
        ag::add_bias(ag::matmul(h, tape.param(*L.w1)), tape.param(*L.b1)));
    h = ag::add_bias(ag::matmul(h, tape.param(*L.w2)), tape.param(*L.b2));
    x = ag::add(x, ag::dropout(h, params_.dropout));
  }
  return ag::layer_norm(x, tape.param(*final_g_), tape.param(*final_b_));
}

ag::Var SequenceEncoder::pool(ag::Tape &tape, ag::Var encoded,
                              const std::vector<bool> &valid) const {
  std::vector<int> rows;
  for (std::size_t i = 0; i < valid.size(); ++i)
    if (valid[i])
      rows.push_back(static_cast<int>(i));
  if (rows.empty())
    throw ValueError("sequence encoder: nothing to pool");
  ag::Var kept = static_cast<Eigen::Index>(rows.size()) == encoded.rows()
                     ? encoded
                     : ag::gather_rows(encoded, rows);
  ag::Var mean = ag::mean_rows(kept);
  return ag::add_bias(ag::matmul(mean, tape.param(*proj_w_)),
                      tape.param(*proj_b_));
}

ag::Var SequenceEncoder::forward(ag::Tape &tape,
                                 const TokenSequence &tokens) const {
  const std::vector<bool> valid = valid_mask(tokens);
  return pool(tape, encode(tape, embed(tape, tokens), valid), valid);
}

} // namespace tridti
