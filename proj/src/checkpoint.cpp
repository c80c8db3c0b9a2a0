//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/checkpoint.hpp"

#include "tridti/binary_io.hpp"
#include "tridti/config.hpp"
#include "tridti/error.hpp"

namespace tridti {

namespace {

constexpr std::string_view kMagic = "TRIDTI-CKPT";

} // namespace

void TrainedModel::build() {
  model = std::make_unique<TriModel>(config, drug_vocab.size(),
                                     protein_vocab.size());
}

std::string serialize_checkpoint(const TrainedModel &m) {
  if (!m.model)
    throw ValueError("checkpoint: no model to save");
  BinaryWriter w;
  w.str(kMagic);
  w.u32(kCheckpointVersion);
  w.str(config_to_json(m.config));
  w.str(variant_name(m.variant));
  w.str(m.drug_vocab.to_json());
  w.str(m.protein_vocab.to_json());
  w.str(split_scheme_name(m.split.scheme));
  w.u64(m.split.seed);
  w.ints(m.split.train);
  w.ints(m.split.val);
  w.ints(m.split.test);
  w.str(m.rng_state);
  const ParamStore &store = m.model->params();
  w.u64(store.size());
  for (const ag::Parameter &p : store) {
    w.str(p.name);
    w.matrix(p.value);
  }
  return w.bytes();
}

TrainedModel deserialize_checkpoint(std::string bytes) {
  BinaryReader r(std::move(bytes), "checkpoint");
  if (r.str() != kMagic)
    throw ParseError("checkpoint: bad magic");
  if (const std::uint32_t v = r.u32(); v != kCheckpointVersion)
    throw ParseError("checkpoint: unsupported version " + std::to_string(v));
  TrainedModel m;
  m.config = config_from_json(r.str());
  m.variant = parse_variant(r.str());
  m.drug_vocab = Vocabulary::from_json(r.str());
  m.protein_vocab = Vocabulary::from_json(r.str());
  m.split.scheme = parse_split_scheme(r.str());
  m.split.seed = r.u64();
  m.split.train = r.ints();
  m.split.val = r.ints();
  m.split.test = r.ints();
  m.rng_state = r.str();
  m.build();
  ParamStore &store = m.model->params();
  const std::uint64_t n = r.u64();
  if (n != store.size())
    throw ParseError("checkpoint: holds " + std::to_string(n) +
                     " tensors, model expects " +
                     std::to_string(store.size()));
  for (ag::Parameter &p : store) {
    const std::string name = r.str();
    Matrix value = r.matrix();
    if (name != p.name)
      throw ParseError("checkpoint: tensor '" + name + "' where '" + p.name +
                       "' was expected");
    if (value.rows() != p.value.rows() || value.cols() != p.value.cols())
      throw ParseError("checkpoint: tensor '" + name + "' has wrong shape");
    p.value = std::move(value);
  }
  if (!r.at_end())
    throw ParseError("checkpoint: trailing bytes");
  return m;
}

void save_checkpoint(const TrainedModel &m,
                     const std::filesystem::path &path) {
  write_binary_file(path, serialize_checkpoint(m));
}

TrainedModel load_checkpoint(const std::filesystem::path &path) {
  return deserialize_checkpoint(read_text_file(path));
}

} // namespace tridti
