//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Preprocessed dataset archive and model checkpoints.

#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"
#include "tridti/checkpoint.hpp"
#include "tridti/config.hpp"
#include "tridti/error.hpp"
#include "tridti/trainer.hpp"

namespace tridti {
namespace {

SyntheticOptions five_by_three() {
  SyntheticOptions o = test::tiny_options();
  o.num_drugs = 5;
  o.num_proteins = 3;
  return o;
}

TEST(Archive, CountsPassThrough) {
  test::ScratchDir dir("raw");
  write_synthetic_dataset(dir.path(), five_by_three());
  SkipManifest manifest;
  const Dataset d = preprocess_directory(dir.path(), &manifest);
  EXPECT_EQ(d.drugs.size(), 5u);
  EXPECT_EQ(d.proteins.size(), 3u);
  EXPECT_EQ(d.samples.size(), 15u);
  EXPECT_TRUE(manifest.drugs.empty());
  EXPECT_EQ(manifest.kept_samples, 15u);
  EXPECT_TRUE(std::is_sorted(d.drugs.begin(), d.drugs.end(),
                             [](const DrugRecord &a, const DrugRecord &b) {
                               return a.drug_id < b.drug_id;
                             }));
  for (const IndexedSample &s : index_samples(d)) {
    EXPECT_GE(s.drug, 0);
    EXPECT_GE(s.protein, 0);
  }
  EXPECT_EQ(d.drug_index("D999"), -1);
}

TEST(Archive, DrugWithoutConformerIsSkipped) {
  test::ScratchDir dir("raw");
  SyntheticOptions o = five_by_three();
  o.drugs_without_conformer = 1;
  write_synthetic_dataset(dir.path(), o);
  SkipManifest manifest;
  const Dataset d = preprocess_directory(dir.path(), &manifest);
  ASSERT_EQ(manifest.drugs.size(), 1u);
  EXPECT_EQ(d.drugs.size(), 4u);
  EXPECT_EQ(d.drug_index(manifest.drugs[0].id), -1);
  EXPECT_EQ(manifest.dropped_samples, 3u);
  EXPECT_EQ(d.samples.size(), 12u);
  for (const InteractionSample &s : d.samples)
    EXPECT_NE(s.drug_id, manifest.drugs[0].id);
  EXPECT_NE(manifest.to_json().find(manifest.drugs[0].id), std::string::npos);
}

TEST(Archive, RerunIsByteIdenticalAndRoundTrips) {
  test::ScratchDir dir("raw");
  write_synthetic_dataset(dir.path(), five_by_three());
  const std::string a = serialize_dataset(preprocess_directory(dir.path()));
  const std::string b = serialize_dataset(preprocess_directory(dir.path()));
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_dataset(deserialize_dataset(a)), a);

  save_dataset(deserialize_dataset(a), dir / "dataset.bin");
  EXPECT_EQ(serialize_dataset(load_dataset(dir / "dataset.bin")), a);
}

TEST(Archive, CorruptBytesAreRejected) {
  test::ScratchDir dir("raw");
  write_synthetic_dataset(dir.path(), five_by_three());
  const std::string a = serialize_dataset(preprocess_directory(dir.path()));
  EXPECT_THROW(deserialize_dataset(a.substr(0, a.size() / 2)), ParseError);
  EXPECT_THROW(deserialize_dataset("nonsense"), ParseError);
  EXPECT_THROW(deserialize_dataset(a + "x"), ParseError);
  EXPECT_THROW(load_dataset(dir / "missing.bin"), ParseError);
}

TEST(Archive, FixedSplitTablesKeepTheirPartition) {
  test::ScratchDir dir("raw");
  SyntheticOptions o = five_by_three();
  o.fixed_split = true;
  write_synthetic_dataset(dir.path(), o);
  const Dataset d = preprocess_directory(dir.path());
  ASSERT_TRUE(d.fixed_train && d.fixed_test);
  EXPECT_EQ(d.fixed_train->size() + d.fixed_test->size(), d.samples.size());
  const Dataset back = deserialize_dataset(serialize_dataset(d));
  EXPECT_EQ(back.fixed_train, d.fixed_train);
  EXPECT_EQ(back.fixed_test, d.fixed_test);
}

TEST(Archive, MissingDirectoryIsAParseError) {
  EXPECT_THROW(preprocess_directory("/nonexistent/tridti"), ParseError);
}

// ---------------------------------------------------------------------------

TEST(Config, JsonRoundTripAndErrors) {
  const ModelConfig c = test::tiny_config();
  const ModelConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  for (const std::string &key : config_keys()) {
    ModelConfig copy = c;
    set_config_value(copy, key, get_config_value(c, key));
    EXPECT_EQ(config_to_json(copy), config_to_json(c)) << key;
  }
  EXPECT_THROW(config_from_json("{\"no_such_key\": 1}"), UsageError);
  EXPECT_THROW(config_from_json("{\"epochs\": \"ten\"}"), UsageError);
  EXPECT_THROW(config_from_json("not json"), UsageError);
  ModelConfig bad = c;
  set_config_value(bad, "attention_heads", "3");  // 8 is not divisible by 3
  EXPECT_THROW(bad.validate(), ValueError);
  EXPECT_THROW(config_from_json("{\"attention_heads\": 3}", c), UsageError);
  EXPECT_THROW(set_config_value(bad, "dropout", "\"high\""), UsageError);
}

TEST(Checkpoint, RoundTripReproducesMetrics) {
  const Dataset data = test::small_dataset(test::tiny_options());
  ModelConfig config = test::tiny_config();
  config.epochs = 2;
  const DatasetSplit split =
      make_splits(static_cast<int>(data.samples.size()),
                  SplitScheme::kRepeated811, 3, 1)[0];
  TrainedModel trained;
  const RunReport report =
      train_run(config, data, split, Variant::kAll, {}, &trained);

  test::ScratchDir dir("ckpt");
  save_checkpoint(trained, dir / "model.ckpt");
  const TrainedModel loaded = load_checkpoint(dir / "model.ckpt");
  EXPECT_EQ(loaded.variant, Variant::kAll);
  EXPECT_EQ(loaded.split, split);
  EXPECT_EQ(loaded.drug_vocab, trained.drug_vocab);
  EXPECT_EQ(config_to_json(loaded.config), config_to_json(config));
  EXPECT_EQ(serialize_checkpoint(loaded), serialize_checkpoint(trained));

  const TrainingData prep = prepare_with_vocab(
      data, loaded.drug_vocab, loaded.protein_vocab, loaded.config);
  const Metrics test_metrics =
      evaluate_indices(loaded, prep, split.test, 0.5);
  EXPECT_EQ(test_metrics.auc, report.test.auc);
  EXPECT_EQ(test_metrics.aupr, report.test.aupr);
  EXPECT_EQ(test_metrics.precision, report.test.precision);

  std::string bytes = serialize_checkpoint(trained);
  EXPECT_THROW(deserialize_checkpoint(bytes.substr(0, bytes.size() - 9)),
               ParseError);
  bytes[0] ^= 0x5a;
  EXPECT_THROW(deserialize_checkpoint(bytes), ParseError);
  TrainedModel empty;
  EXPECT_THROW(serialize_checkpoint(empty), ValueError);
}

} // namespace
} // namespace tridti
