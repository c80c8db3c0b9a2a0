//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// The tri-modal interaction model: three drug encoders (token transformer,
// GCN over the bond graph, GVP-GNN over the conformer), three protein
// encoders (token transformer, TAGCN over pockets, GCN over the residue
// contact graph), contrastive alignment within each entity type and the
// fused MLP classifier.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tridti/contrastive.hpp"
#include "tridti/fusion.hpp"
#include "tridti/geometric.hpp"
#include "tridti/graph_encoders.hpp"
#include "tridti/ingest.hpp"
#include "tridti/sequence_encoder.hpp"
#include "tridti/tokenizer.hpp"

namespace tridti {

// Every hyperparameter of a run. Field names are the config-file keys.
struct ModelConfig {
  int embed_dim = 128;  // D

  int transformer_layers = 2;
  int attention_heads = 4;
  int model_dim = 128;
  int feedforward_dim = 512;

  int gcn_hidden = 128;
  int gcn_layers = 2;

  int tagcn_hidden = 64;
  int tagcn_layers = 2;
  int tagcn_hops = 2;

  int gvp_scalar_hidden = 64;
  int gvp_vector_hidden = 16;
  int gvp_layers = 3;

  int mlp_hidden1 = 512;
  int mlp_hidden2 = 128;

  double dropout = 0.2;
  double temperature = kDefaultTemperature;
  double alpha = 1.0;
  double beta = 0.1;
  double gamma = 0.1;

  double learning_rate = 1e-3;
  double weight_decay = 0.0;
  int batch_size = 32;
  int epochs = 100;
  int patience = 10;  // epochs without val AUC gain; 0 disables
  int runs = 10;
  double threshold = 0.5;
  std::uint64_t seed = 0;

  int drug_vocab_size = 2048;
  int protein_vocab_size = 8192;
  int min_pair_freq = 5;
  int drug_max_len = 256;
  int protein_max_len = 1024;

  void validate() const;

  TransformerParams transformer() const;
  GcnParams gcn() const;
  TagcnParams tagcn() const;
  GeometricParams geometric() const;
  MlpParams mlp() const;
  LossWeights loss_weights() const;

  friend bool operator==(const ModelConfig &, const ModelConfig &) = default;
};

// Ablation variants. Knockouts zero the fused blocks of the removed
// modalities and drop all contrastive terms.
enum class Variant {
  kAll,
  kNoCL,
  kNoL12,
  kNoL23,
  kNoL13,
  kSeqOnly,
  kGraphOnly,
  kStruct3dOnly,
};

Variant parse_variant(std::string_view name);
std::string_view variant_name(Variant v);
inline constexpr std::array<Variant, 8> kAllVariants = {
    Variant::kAll,    Variant::kNoCL,     Variant::kNoL12,
    Variant::kNoL23,  Variant::kNoL13,    Variant::kSeqOnly,
    Variant::kGraphOnly, Variant::kStruct3dOnly};

struct VariantPlan {
  std::array<bool, 3> modality{true, true, true};  // seq, graph, struct3d
  ContrastivePairs pairs;
  bool contrastive = true;
};

VariantPlan plan_for(Variant v);

// Encoder-ready inputs of one entity.
struct PreparedDrug {
  std::string id;
  TokenSequence tokens;
  Matrix features2d;
  Propagation prop2d;
  Molecular3DGraph graph3d;
};

struct PreparedProtein {
  std::string id;
  TokenSequence tokens;
  std::vector<PreparedPocket> pockets;
  Matrix residue_features;
  Propagation residue_prop;
};

// Requires graph3d / residue_graph and at least one pocket.
PreparedDrug prepare_drug(const DrugRecord &drug, const Vocabulary &vocab,
                          int max_len);
PreparedProtein prepare_protein(const ProteinRecord &protein,
                                const Vocabulary &vocab, int max_len);

// Indexes into the prepared drug and protein lists.
struct PairRef {
  int drug = 0;
  int protein = 0;
  double label = 0.0;
};

class TriModel {
public:
  TriModel(const ModelConfig &config, int drug_vocab_size,
           int protein_vocab_size);

  ParamStore &params() { return store_; }
  const ParamStore &params() const { return store_; }
  const ModelConfig &config() const { return config_; }

  // Rows (1 x D) for d1, d2, d3 / t1, t2, t3. Disabled modalities are zero.
  std::array<ag::Var, 3> encode_drug(ag::Tape &tape, const PreparedDrug &drug,
                                     const VariantPlan &plan) const;
  std::array<ag::Var, 3> encode_protein(ag::Tape &tape,
                                        const PreparedProtein &protein,
                                        const VariantPlan &plan) const;

  struct Output {
    ag::Var prob;        // N x 1
    ag::Var cls;         // BCE
    ag::Var cl_drug;     // invalid when disabled
    ag::Var cl_protein;  // invalid when disabled
    ag::Var loss;
  };

  // Each distinct drug and protein of the batch is encoded once; the
  // contrastive losses run over those distinct entities.
  Output forward(ag::Tape &tape, std::span<const PairRef> batch,
                 std::span<const PreparedDrug> drugs,
                 std::span<const PreparedProtein> proteins,
                 const VariantPlan &plan) const;

  // Inference-mode probabilities, evaluated in chunks of batch_size.
  std::vector<double> predict(std::span<const PairRef> pairs,
                              std::span<const PreparedDrug> drugs,
                              std::span<const PreparedProtein> proteins,
                              const VariantPlan &plan) const;

  // Inference-mode embeddings (1 x D each).
  std::array<RowVector, 3> drug_embeddings(const PreparedDrug &drug) const;
  std::array<RowVector, 3>
  protein_embeddings(const PreparedProtein &protein) const;

private:
  ModelConfig config_;
  ParamStore store_;
  std::unique_ptr<SequenceEncoder> drug_seq_, protein_seq_;
  std::unique_ptr<GcnEncoder> drug_graph_;
  std::unique_ptr<GeometricEncoder> drug_geo_;
  std::unique_ptr<PocketEncoder> pockets_;
  std::unique_ptr<GcnEncoder> residues_;
  std::unique_ptr<MlpHead> head_;
};

} // namespace tridti
