//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/model.hpp"

#include <algorithm>
#include <map>

#include "tridti/error.hpp"
#include "tridti/features.hpp"

namespace tridti {

void ModelConfig::validate() const {
  auto positive = [](int v, const char *name) {
    if (v < 1)
      throw ValueError(std::string("config: ") + name + " must be >= 1");
  };
  positive(embed_dim, "embed_dim");
  positive(attention_heads, "attention_heads");
  positive(model_dim, "model_dim");
  positive(feedforward_dim, "feedforward_dim");
  positive(gcn_hidden, "gcn_hidden");
  positive(gcn_layers, "gcn_layers");
  positive(tagcn_hidden, "tagcn_hidden");
  positive(tagcn_layers, "tagcn_layers");
  positive(tagcn_hops, "tagcn_hops");
  positive(gvp_scalar_hidden, "gvp_scalar_hidden");
  positive(gvp_vector_hidden, "gvp_vector_hidden");
  positive(mlp_hidden1, "mlp_hidden1");
  positive(mlp_hidden2, "mlp_hidden2");
  positive(batch_size, "batch_size");
  positive(runs, "runs");
  positive(drug_max_len, "drug_max_len");
  positive(protein_max_len, "protein_max_len");
  if (transformer_layers < 0 || gvp_layers < 0 || epochs < 0 || patience < 0
      || min_pair_freq < 0)
    throw ValueError("config: layer, epoch and patience counts must be >= 0");
  if (!(learning_rate > 0.0))
    throw ValueError("config: learning_rate must be positive");
  if (!(weight_decay >= 0.0))
    throw ValueError("config: weight_decay must be >= 0");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ValueError("config: threshold must lie in [0, 1]");
  if (!(temperature > 0.0))
    throw ValueError("config: temperature must be positive");
  transformer().validate();
  gcn().validate();
  tagcn().validate();
  geometric().validate();
  mlp().validate();
  loss_weights().validate();
}

TransformerParams ModelConfig::transformer() const {
  return {transformer_layers, attention_heads, model_dim, feedforward_dim,
          dropout};
}

GcnParams ModelConfig::gcn() const { return {gcn_hidden, gcn_layers, dropout}; }

TagcnParams ModelConfig::tagcn() const {
  return {tagcn_hidden, tagcn_layers, tagcn_hops, dropout};
}

GeometricParams ModelConfig::geometric() const {
  return {gvp_scalar_hidden, gvp_vector_hidden, gvp_layers};
}

MlpParams ModelConfig::mlp() const {
  return {mlp_hidden1, mlp_hidden2, dropout};
}

LossWeights ModelConfig::loss_weights() const { return {alpha, beta, gamma}; }

namespace {

constexpr std::array<std::string_view, 8> kVariantNames = {
    "all",     "no_CL",    "no_L12",     "no_L23",
    "no_L13",  "seq_only", "graph_only", "struct3d_only"};

} // namespace

Variant parse_variant(std::string_view name) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i)
    if (kVariantNames[i] == name)
      return static_cast<Variant>(i);
  throw UsageError("unknown ablation variant '" + std::string(name) + "'");
}

std::string_view variant_name(Variant v) {
  return kVariantNames[static_cast<std::size_t>(v)];
}

VariantPlan plan_for(Variant v) {
  VariantPlan p;
  switch (v) {
  case Variant::kAll:
    break;
  case Variant::kNoCL:
    p.contrastive = false;
    break;
  case Variant::kNoL12:
    p.pairs.l12 = false;
    break;
  case Variant::kNoL23:
    p.pairs.l23 = false;
    break;
  case Variant::kNoL13:
    p.pairs.l13 = false;
    break;
  case Variant::kSeqOnly:
    p.modality = {true, false, false};
    p.contrastive = false;
    break;
  case Variant::kGraphOnly:
    p.modality = {false, true, false};
    p.contrastive = false;
    break;
  case Variant::kStruct3dOnly:
    p.modality = {false, false, true};
    p.contrastive = false;
    break;
  }
  return p;
}

PreparedDrug prepare_drug(const DrugRecord &drug, const Vocabulary &vocab,
                          int max_len) {
  if (!drug.graph3d)
    throw IntegrityError("drug " + drug.drug_id + " has no conformer");
  if (drug.graph2d.num_atoms() < 1)
    throw IntegrityError("drug " + drug.drug_id + " has an empty graph");
  PreparedDrug p;
  p.id = drug.drug_id;
  p.tokens = tokenize(drug.smiles, vocab, max_len);
  p.features2d = drug.graph2d.node_features;
  p.prop2d = gcn_propagation(drug.graph2d.num_atoms(), drug.graph2d.bond_list);
  p.graph3d = *drug.graph3d;
  return p;
}

PreparedProtein prepare_protein(const ProteinRecord &protein,
                                const Vocabulary &vocab, int max_len) {
  if (!protein.residue_graph)
    throw IntegrityError("protein " + protein.protein_id +
                         " has no structure");
  if (protein.pockets.empty())
    throw IntegrityError("protein " + protein.protein_id + " has no pockets");
  PreparedProtein p;
  p.id = protein.protein_id;
  p.tokens = tokenize(protein.sequence, vocab, max_len);
  for (const PocketGraph &g : protein.pockets)
    p.pockets.push_back(prepare_pocket(g));
  const ResidueContactGraph &r = *protein.residue_graph;
  p.residue_features = r.residue_onehot;
  p.residue_prop = gcn_propagation(r.num_residues(), r.edges);
  return p;
}

TriModel::TriModel(const ModelConfig &config, int drug_vocab_size,
                   int protein_vocab_size)
    : config_(config) {
  config_.validate();
  Rng rng(config.seed);
  const int d = config.embed_dim;
  drug_seq_ = std::make_unique<SequenceEncoder>(
      store_, "drug.seq", drug_vocab_size, config.drug_max_len,
      config.transformer(), d, rng);
  drug_graph_ = std::make_unique<GcnEncoder>(store_, "drug.graph",
                                             kAtomFeatureDim, config.gcn(), d,
                                             rng);
  drug_geo_ = std::make_unique<GeometricEncoder>(store_, "drug.struct",
                                                 config.geometric(), d, rng);
  protein_seq_ = std::make_unique<SequenceEncoder>(
      store_, "protein.seq", protein_vocab_size, config.protein_max_len,
      config.transformer(), d, rng);
  pockets_ = std::make_unique<PocketEncoder>(
      store_, "protein.pocket", kPocketFeatureDim, config.tagcn(), d, rng);
  residues_ = std::make_unique<GcnEncoder>(store_, "protein.struct",
                                           kResidueTypes, config.gcn(), d,
                                           rng);
  head_ = std::make_unique<MlpHead>(store_, "head", kNumModalBlocks * d,
                                    config.mlp(), rng);
}

std::array<ag::Var, 3> TriModel::encode_drug(ag::Tape &tape,
                                             const PreparedDrug &drug,
                                             const VariantPlan &plan) const {
  const Matrix zero = Matrix::Zero(1, config_.embed_dim);
  return {plan.modality[0] ? drug_seq_->forward(tape, drug.tokens)
                           : tape.constant(zero),
          plan.modality[1]
              ? drug_graph_->forward(tape, drug.features2d, drug.prop2d)
              : tape.constant(zero),
          plan.modality[2] ? drug_geo_->forward(tape, drug.graph3d)
                           : tape.constant(zero)};
}

std::array<ag::Var, 3>
TriModel::encode_protein(ag::Tape &tape, const PreparedProtein &protein,
                         const VariantPlan &plan) const {
  const Matrix zero = Matrix::Zero(1, config_.embed_dim);
  return {plan.modality[0] ? protein_seq_->forward(tape, protein.tokens)
                           : tape.constant(zero),
          plan.modality[1] ? pockets_->forward(tape, protein.pockets)
                           : tape.constant(zero),
          plan.modality[2] ? residues_->forward(tape, protein.residue_features,
                                                protein.residue_prop)
                           : tape.constant(zero)};
}

namespace {

// Distinct ids in first-appearance order and the row of each batch entry.
std::pair<std::vector<int>, std::vector<int>>
distinct(std::span<const PairRef> batch, int PairRef::*member) {
  std::map<int, int> row;
  std::vector<int> ids, rows;
  for (const PairRef &p : batch) {
    auto [it, fresh] = row.emplace(p.*member, static_cast<int>(ids.size()));
    if (fresh)
      ids.push_back(p.*member);
    rows.push_back(it->second);
  }
  return {ids, rows};
}

} // namespace

TriModel::Output TriModel::forward(ag::Tape &tape,
                                   std::span<const PairRef> batch,
                                   std::span<const PreparedDrug> drugs,
                                   std::span<const PreparedProtein> proteins,
                                   const VariantPlan &plan) const {
  if (batch.empty())
    throw ValueError("model: empty batch");
  auto [drug_ids, drug_rows] = distinct(batch, &PairRef::drug);
  auto [prot_ids, prot_rows] = distinct(batch, &PairRef::protein);

  std::array<std::vector<ag::Var>, 3> dz, pz;
  for (int id : drug_ids) {
    if (id < 0 || id >= static_cast<int>(drugs.size()))
      throw BoundsError("model: drug index out of range");
    auto z = encode_drug(tape, drugs[id], plan);
    for (int m = 0; m < 3; ++m)
      dz[m].push_back(z[m]);
  }
  for (int id : prot_ids) {
    if (id < 0 || id >= static_cast<int>(proteins.size()))
      throw BoundsError("model: protein index out of range");
    auto z = encode_protein(tape, proteins[id], plan);
    for (int m = 0; m < 3; ++m)
      pz[m].push_back(z[m]);
  }
  std::array<ag::Var, 3> dm, pm;
  for (int m = 0; m < 3; ++m) {
    dm[m] = ag::concat_rows(dz[m]);
    pm[m] = ag::concat_rows(pz[m]);
  }

  Output out;
  if (plan.contrastive && plan.pairs.count() > 0) {
    out.cl_drug = trimodal_loss(dm[0], dm[1], dm[2], config_.temperature,
                                plan.pairs);
    out.cl_protein = trimodal_loss(pm[0], pm[1], pm[2], config_.temperature,
                                   plan.pairs);
  }

  std::array<ag::Var, kNumModalBlocks> blocks;
  for (int m = 0; m < 3; ++m) {
    blocks[m] = ag::gather_rows(dm[m], drug_rows);
    blocks[3 + m] = ag::gather_rows(pm[m], prot_rows);
  }
  out.prob = head_->forward(tape, fuse(blocks));
  std::vector<double> labels;
  labels.reserve(batch.size());
  for (const PairRef &p : batch)
    labels.push_back(p.label);
  out.cls = ag::bce(out.prob, labels, kProbabilityEps);
  LossWeights w = config_.loss_weights();
  if (!plan.contrastive)
    w.beta = w.gamma = 0.0;
  out.loss = total_loss(out.cls, out.cl_drug, out.cl_protein, w);
  return out;
}

std::vector<double> TriModel::predict(std::span<const PairRef> pairs,
                                      std::span<const PreparedDrug> drugs,
                                      std::span<const PreparedProtein> proteins,
                                      const VariantPlan &plan) const {
  VariantPlan inference = plan;
  inference.contrastive = false;
  std::vector<double> probs;
  probs.reserve(pairs.size());
  const std::size_t chunk = static_cast<std::size_t>(config_.batch_size);
  for (std::size_t start = 0; start < pairs.size(); start += chunk) {
    ag::Tape tape;
    auto batch = pairs.subspan(start, std::min(chunk, pairs.size() - start));
    Output out = forward(tape, batch, drugs, proteins, inference);
    for (Eigen::Index i = 0; i < out.prob.rows(); ++i)
      probs.push_back(out.prob.value()(i, 0));
  }
  return probs;
}

std::array<RowVector, 3>
TriModel::drug_embeddings(const PreparedDrug &drug) const {
  ag::Tape tape;
  auto z = encode_drug(tape, drug, VariantPlan{});
  return {z[0].value().row(0), z[1].value().row(0), z[2].value().row(0)};
}

std::array<RowVector, 3>
TriModel::protein_embeddings(const PreparedProtein &protein) const {
  ag::Tape tape;
  auto z = encode_protein(tape, protein, VariantPlan{});
  return {z[0].value().row(0), z[1].value().row(0), z[2].value().row(0)};
}

} // namespace tridti
