//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Transformer encoder for token sequences (drug SMILES, protein residues).
// Pre-norm blocks: x + MHA(LN(x)), then x + FF(LN(x)); a final LayerNorm;
// masked mean pooling; a linear map to the shared embedding width.

#pragma once

#include <string>
#include <vector>

#include "tridti/autograd.hpp"
#include "tridti/params.hpp"
#include "tridti/tokenizer.hpp"

namespace tridti {

struct TransformerParams {
  int num_layers = 2;
  int num_heads = 4;
  int model_dim = 128;
  int feedforward_dim = 512;
  double dropout = 0.2;

  void validate() const;
};

class SequenceEncoder {
public:
  SequenceEncoder(ParamStore &store, const std::string &prefix,
                  int vocab_size, int max_len, const TransformerParams &params,
                  int out_dim, Rng &rng);

  // Content + position embedding of the tokens (l x model_dim).
  ag::Var embed(ag::Tape &tape, const TokenSequence &tokens) const;

  // Transformer stack. valid[i] is false for PAD positions.
  ag::Var encode(ag::Tape &tape, ag::Var embedded,
                 const std::vector<bool> &valid) const;

  // Masked mean over valid rows followed by the output projection (1 x D).
  ag::Var pool(ag::Tape &tape, ag::Var encoded,
               const std::vector<bool> &valid) const;

  // embed -> encode -> pool with PAD ids masked.
  ag::Var forward(ag::Tape &tape, const TokenSequence &tokens) const;

  const TransformerParams &params() const { return params_; }
  int max_len() const { return max_len_; }

private:
  struct Layer {
    ag::Parameter *ln1_g, *ln1_b, *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
    ag::Parameter *ln2_g, *ln2_b, *w1, *b1, *w2, *b2;
  };

  ag::Var attention(ag::Tape &tape, const Layer &layer, ag::Var x,
                    const std::vector<bool> &valid) const;

  TransformerParams params_;
  int max_len_;
  ag::Parameter *content_, *position_;
  std::vector<Layer> layers_;
  ag::Parameter *final_g_, *final_b_, *proj_w_, *proj_b_;
};

// Row-wise key mask for a token sequence: true where id != PAD.
std::vector<bool> valid_mask(const TokenSequence &tokens);

} // namespace tridti
