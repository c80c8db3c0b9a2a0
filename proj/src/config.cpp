//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "tridti/config.hpp"

#include <variant>

#include <json.hpp>

#include "tridti/error.hpp"

namespace tridti {

namespace {

using Field = std::variant<int ModelConfig::*, double ModelConfig::*,
                           std::uint64_t ModelConfig::*>;

struct Entry {
  const char *name;
  Field field;
};

const std::vector<Entry> &fields() {
  static const std::vector<Entry> table = {
      {"embed_dim", &ModelConfig::embed_dim},
      {"transformer_layers", &ModelConfig::transformer_layers},
      {"attention_heads", &ModelConfig::attention_heads},
      {"model_dim", &ModelConfig::model_dim},
      {"feedforward_dim", &ModelConfig::feedforward_dim},
      {"gcn_hidden", &ModelConfig::gcn_hidden},
      {"gcn_layers", &ModelConfig::gcn_layers},
      {"tagcn_hidden", &ModelConfig::tagcn_hidden},
      {"tagcn_layers", &ModelConfig::tagcn_layers},
      {"tagcn_hops", &ModelConfig::tagcn_hops},
      {"gvp_scalar_hidden", &ModelConfig::gvp_scalar_hidden},
      {"gvp_vector_hidden", &ModelConfig::gvp_vector_hidden},
      {"gvp_layers", &ModelConfig::gvp_layers},
      {"mlp_hidden1", &ModelConfig::mlp_hidden1},
      {"mlp_hidden2", &ModelConfig::mlp_hidden2},
      {"dropout", &ModelConfig::dropout},
      {"temperature", &ModelConfig::temperature},
      {"alpha", &ModelConfig::alpha},
      {"beta", &ModelConfig::beta},
      {"gamma", &ModelConfig::gamma},
      {"learning_rate", &ModelConfig::learning_rate},
      {"weight_decay", &ModelConfig::weight_decay},
      {"batch_size", &ModelConfig::batch_size},
      {"epochs", &ModelConfig::epochs},
      {"patience", &ModelConfig::patience},
      {"runs", &ModelConfig::runs},
      {"threshold", &ModelConfig::threshold},
      {"seed", &ModelConfig::seed},
      {"drug_vocab_size", &ModelConfig::drug_vocab_size},
      {"protein_vocab_size", &ModelConfig::protein_vocab_size},
      {"min_pair_freq", &ModelConfig::min_pair_freq},
      {"drug_max_len", &ModelConfig::drug_max_len},
      {"protein_max_len", &ModelConfig::protein_max_len},
  };
  return table;
}

const Entry &find(std::string_view key) {
  for (const Entry &e : fields())
    if (key == e.name)
      return e;
  throw UsageError("config: unknown key '" + std::string(key) + "'");
}

void assign(ModelConfig &c, const Entry &e, const nlohmann::json &v) {
  const std::string key = e.name;
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(c.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!v.is_number())
            throw UsageError("config: '" + key + "' must be a number");
          c.*member = v.get<double>();
        } else if constexpr (std::is_same_v<T, int>) {
          if (!v.is_number_integer())
            throw UsageError("config: '" + key + "' must be an integer");
          c.*member = v.get<int>();
        } else {
          if (!v.is_number_unsigned())
            throw UsageError("config: '" + key +
                             "' must be a nonnegative integer");
          c.*member = v.get<std::uint64_t>();
        }
      },
      e.field);
}

nlohmann::json value_of(const ModelConfig &c, const Entry &e) {
  return std::visit([&](auto member) { return nlohmann::json(c.*member); },
                    e.field);
}

nlohmann::json parse(std::string_view text, const char *what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &ex) {
    throw UsageError(std::string(what) + ": invalid JSON: " + ex.what());
  }
}

} // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Entry &e : fields())
    out.emplace_back(e.name);
  return out;
}

void set_config_value(ModelConfig &config, std::string_view key,
                      std::string_view json_value) {
  assign(config, find(key), parse(json_value, "config value"));
}

std::string get_config_value(const ModelConfig &config, std::string_view key) {
  return value_of(config, find(key)).dump();
}

ModelConfig config_from_json(std::string_view text, const ModelConfig &base) {
  nlohmann::json doc = parse(text, "config");
  if (!doc.is_object())
    throw UsageError("config: top level must be an object");
  ModelConfig c = base;
  for (auto it = doc.begin(); it != doc.end(); ++it)
    assign(c, find(it.key()), it.value());
  try {
    c.validate();
  } catch (const ValueError &e) {
    throw UsageError(e.what());
  }
  return c;
}

std::string config_to_json(const ModelConfig &config) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const Entry &e : fields())
    doc[e.name] = value_of(config, e);
  return doc.dump(2) + "\n";
}

ModelConfig load_config(const std::filesystem::path &path,
                        const ModelConfig &base) {
  return config_from_json(read_text_file(path), base);
}

ModelConfig desk_config() {
  ModelConfig c;
  c.embed_dim = 32;
  c.transformer_layers = 1;
  c.attention_heads = 4;
  c.model_dim = 32;
  c.feedforward_dim = 64;
  c.gcn_hidden = 32;
  c.tagcn_hidden = 32;
  c.gvp_scalar_hidden = 32;
  c.gvp_vector_hidden = 8;
  c.gvp_layers = 2;
  c.mlp_hidden1 = 64;
  c.mlp_hidden2 = 32;
  c.dropout = 0.0;
  c.learning_rate = 0.002;
  c.batch_size = 8;
  c.epochs = 30;
  c.patience = 0;
  c.runs = 1;
  c.drug_vocab_size = 128;
  c.protein_vocab_size = 256;
  c.min_pair_freq = 2;
  c.drug_max_len = 96;
  c.protein_max_len = 128;
  return c;
}

} // namespace tridti
