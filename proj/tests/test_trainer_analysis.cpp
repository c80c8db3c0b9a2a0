//
// Project tridti - Copyright 2026 The tridti Authors
// SPDX-License-Identifier: Apache-2.0
//

// Training harness, ablations, ranking, similarity analysis and sweeps.

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "tridti/analysis.hpp"
#include "tridti/contrastive.hpp"
#include "tridti/error.hpp"
#include "tridti/trainer.hpp"

namespace tridti {
namespace {

int count_lines(const std::string &s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

class Trained : public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    data_ = new Dataset(test::small_dataset(test::tiny_options()));
    config_ = test::tiny_config();
    config_.epochs = 2;
    split_ = make_splits(static_cast<int>(data_->samples.size()),
                         SplitScheme::kRepeated811, 3, 1)[0];
    model_ = new TrainedModel;
    report_ = train_run(config_, *data_, split_, Variant::kAll, {}, model_);
    prep_ = new TrainingData(prepare_with_vocab(
        *data_, model_->drug_vocab, model_->protein_vocab, config_));
  }
  static void TearDownTestSuite() {
    delete prep_;
    delete model_;
    delete data_;
  }

  static Dataset *data_;
  static ModelConfig config_;
  static DatasetSplit split_;
  static TrainedModel *model_;
  static RunReport report_;
  static TrainingData *prep_;
};

Dataset *Trained::data_ = nullptr;
ModelConfig Trained::config_;
DatasetSplit Trained::split_;
TrainedModel *Trained::model_ = nullptr;
RunReport Trained::report_;
TrainingData *Trained::prep_ = nullptr;

TEST_F(Trained, RerunIsIdentical) {
  TrainedModel again;
  const RunReport r = train_run(config_, *data_, split_, Variant::kAll, {}, &again);
  EXPECT_TRUE(r == report_);
  EXPECT_EQ(serialize_checkpoint(again), serialize_checkpoint(*model_));
  ASSERT_EQ(r.epochs.size(), 2u);
  EXPECT_GE(r.best_epoch, 1);
  for (double v : {r.train.auc, r.train.aupr, r.train.precision}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST_F(Trained, ZeroEpochsReportsTheUntrainedBaseline) {
  ModelConfig c = config_;
  c.epochs = 0;
  const RunReport r = train_run(c, *data_, split_, Variant::kAll);
  EXPECT_TRUE(r.epochs.empty());
  EXPECT_EQ(r.best_epoch, 0);
}

TEST_F(Trained, AblationTableHasOneRowPerVariant) {
  ModelConfig c = config_;
  c.epochs = 1;
  const std::vector<TrainReport> reports =
      run_ablation(c, *data_, {split_}, {Variant::kAll, Variant::kNoCL}, "tiny");
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].variant, "all");
  EXPECT_EQ(reports[1].variant, "no_CL");
  const std::string table = report_table(reports);
  EXPECT_NE(table.find("no_CL"), std::string::npos);
  EXPECT_NE(table.find("AUC"), std::string::npos);
  // One run per variant: no spread is reported.
  EXPECT_EQ(table.find("±"), std::string::npos);
  EXPECT_EQ(count_lines(table), 3);
  const auto doc = nlohmann::json::parse(reports_json(reports));
  ASSERT_TRUE(doc.is_array());
  EXPECT_EQ(doc.size(), 2u);
}

TEST(Variants, PlansFollowTheKnockoutRules) {
  EXPECT_FALSE(plan_for(Variant::kNoCL).contrastive);
  const VariantPlan seq = plan_for(Variant::kSeqOnly);
  EXPECT_EQ(seq.modality, (std::array<bool, 3>{true, false, false}));
  EXPECT_FALSE(seq.contrastive);
  EXPECT_EQ(plan_for(Variant::kStruct3dOnly).modality,
            (std::array<bool, 3>{false, false, true}));
  const VariantPlan no12 = plan_for(Variant::kNoL12);
  EXPECT_TRUE(no12.contrastive);
  EXPECT_FALSE(no12.pairs.l12);
  EXPECT_TRUE(no12.pairs.l23 && no12.pairs.l13);
  for (Variant v : kAllVariants)
    EXPECT_EQ(parse_variant(variant_name(v)), v);
  EXPECT_THROW(parse_variant("everything"), UsageError);
}

TEST(Trainer, SummaryStdNeedsTwoRuns) {
  TrainReport r;
  RunReport a;
  a.test.auc = 0.8;
  r.runs.push_back(a);
  r.summarize();
  EXPECT_DOUBLE_EQ(r.auc.mean, 0.8);
  EXPECT_EQ(r.auc.std, 0.0);
  a.test.auc = 0.6;
  r.runs.push_back(a);
  r.summarize();
  EXPECT_NEAR(r.auc.mean, 0.7, 1e-12);
  EXPECT_NEAR(r.auc.std, std::sqrt(0.02), 1e-12);
}

TEST(Trainer, BalancedSubsample) {
  const Dataset d = test::small_dataset(test::tiny_options());
  const Dataset s = balanced_subsample(d, 8, 1);
  ASSERT_EQ(s.samples.size(), 8u);
  int pos = 0;
  for (const InteractionSample &x : s.samples)
    pos += x.label;
  EXPECT_EQ(pos, 4);
  EXPECT_THROW(balanced_subsample(d, 7, 1), ValueError);
  EXPECT_THROW(balanced_subsample(d, 100, 1), ValueError);
}

// ---------------------------------------------------------------------------

TEST_F(Trained, RankingIsSortedAndTruncated) {
  const std::string drug = prep_->drugs[0].id;
  const auto all = rank_targets(*model_, *prep_, drug, {}, 100);
  ASSERT_EQ(all.size(), prep_->proteins.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].rank, static_cast<int>(i) + 1);
    if (i > 0)
      EXPECT_GE(all[i - 1].score, all[i].score);
  }
  const auto top = rank_targets(*model_, *prep_, drug, {}, 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].id, all[0].id);
  const auto two = rank_drugs(*model_, *prep_, prep_->proteins[1].id,
                              {prep_->drugs[4].id, prep_->drugs[2].id}, 10);
  EXPECT_EQ(two.size(), 2u);
  const std::string csv = ranking_csv(all, "target_id");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rank,target_id,score");
  EXPECT_EQ(count_lines(csv), static_cast<int>(all.size()) + 1);

  EXPECT_THROW(rank_targets(*model_, *prep_, "nope", {}, 3), UsageError);
  EXPECT_THROW(rank_targets(*model_, *prep_, drug, {"T999"}, 3), UsageError);
  EXPECT_THROW(rank_targets(*model_, *prep_, drug, {}, 0), UsageError);
}

TEST_F(Trained, RankingTiesBreakById) {
  TrainedModel flat = deserialize_checkpoint(serialize_checkpoint(*model_));
  // A zero output layer makes every score sigmoid(0).
  flat.model->params().at("head.fc3.w").value.setZero();
  flat.model->params().at("head.fc3.b").value.setZero();
  const auto r = rank_drugs(flat, *prep_, prep_->proteins[0].id,
                            {"D004", "D001", "D003"}, 3);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].id, "D001");
  EXPECT_EQ(r[1].id, "D003");
  EXPECT_EQ(r[2].id, "D004");
  EXPECT_DOUBLE_EQ(r[0].score, 0.5);
}

TEST(Similarity, BinsAndPairOracle) {
  EXPECT_EQ(similarity_bin(-1.0), 0);
  EXPECT_EQ(similarity_bin(1.0), kSimilarityBins - 1);
  EXPECT_EQ(similarity_bin(0.01), 20);
  EXPECT_EQ(similarity_bin(-0.01), 19);

  Rng rng(5);
  std::vector<std::string> ids;
  std::vector<RowVector> a, b;
  for (int i = 0; i < 20; ++i) {
    ids.push_back("E" + std::to_string(i));
    a.push_back(test::random_matrix(1, 6, rng));
    b.push_back(test::random_matrix(1, 6, rng));
  }
  const ModalPairSimilarity p = pair_similarity("d1-d2", ids, a, b);
  ASSERT_EQ(p.values.size(), 20u);
  int inside = 0, total = 0;
  for (int i = 0; i < 20; ++i) {
    const double c = a[i].dot(b[i]) / (a[i].norm() * b[i].norm());
    EXPECT_NEAR(p.values[i], c, 1e-12);
    inside += std::abs(c) <= 0.25;
  }
  for (int c : p.histogram)
    total += c;
  EXPECT_EQ(total, 20);
  EXPECT_NEAR(p.inside_band, inside / 20.0, 1e-12);
}

TEST_F(Trained, ModalSimilarityReport) {
  const SimilarityReport r = modal_similarity(*model_, *prep_);
  ASSERT_EQ(r.pairs.size(), 6u);
  EXPECT_EQ(r.pairs[0].name, "d1-d2");
  EXPECT_EQ(r.pairs[5].name, "t1-t3");
  std::size_t n = 0, inside = 0;
  for (const ModalPairSimilarity &p : r.pairs) {
    const std::size_t expect =
        p.name[0] == 'd' ? prep_->drugs.size() : prep_->proteins.size();
    ASSERT_EQ(p.values.size(), expect);
    int total = 0;
    for (int c : p.histogram)
      total += c;
    EXPECT_EQ(total, static_cast<int>(expect));
    for (double v : p.values) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
      inside += std::abs(v) <= kSimilarityBand;
    }
    n += p.values.size();
  }
  EXPECT_NEAR(r.inside_band, static_cast<double>(inside) / n, 1e-12);
  EXPECT_EQ(count_lines(r.values_csv()), static_cast<int>(n) + 1);
  EXPECT_EQ(count_lines(r.histogram_csv()), 6 * kSimilarityBins + 1);
  const auto doc = nlohmann::json::parse(r.to_json());
  EXPECT_TRUE(doc.contains("inside_band_fraction"));
  EXPECT_EQ(r.to_svg().rfind("<svg", 0), 0u);
}

// ---------------------------------------------------------------------------

TEST(Sweep, GridParsingAndPoints) {
  const SweepGrid g =
      parse_sweep_grid(R"({"dropout": [0.0, 0.1], "gcn_layers": [1, 2, 3]})");
  EXPECT_EQ(g.points().size(), 6u);
  SweepGrid one = g;
  one.cartesian = false;
  EXPECT_EQ(one.points().size(), 5u);
  EXPECT_EQ(default_sweep_grid().points().size(), 18u);
  EXPECT_THROW(parse_sweep_grid("{}"), UsageError);
  EXPECT_THROW(parse_sweep_grid(R"({"colour": [1]})"), UsageError);
  EXPECT_THROW(parse_sweep_grid(R"({"dropout": []})"), UsageError);
  EXPECT_THROW(parse_sweep_grid("[1, 2]"), UsageError);
}

TEST_F(Trained, SweepRunsOneReportPerPoint) {
  ModelConfig c = config_;
  c.epochs = 1;
  const auto rows = run_sweep(c, *data_, SplitScheme::kRepeated811,
                              parse_sweep_grid(R"({"dropout": [0.0, 0.3]})"),
                              "tiny");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].setting[0].second, "0.3");
  EXPECT_EQ(count_lines(sweep_csv(rows)), 3);
  EXPECT_EQ(nlohmann::json::parse(sweep_json(rows)).size(), 2u);
  EXPECT_THROW(run_sweep(c, *data_, SplitScheme::kRepeated811,
                         parse_sweep_grid(R"({"attention_heads": [3]})"),
                         "tiny"),
               UsageError);
}

} // namespace
} // namespace tridti
