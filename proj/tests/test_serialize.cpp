#include <gtest/gtest.h>

#include <cmath>

#include "scorecard/error.hpp"
#include "scorecard/serialize.hpp"

using namespace scorecard;

namespace {

template <class T>
T round_trip(const T& v, std::string_view what) {
  return parse_json<T>(Json::parse(dump_json(Json(v))), what);
}

}  // namespace

TEST(Serialize, ConfigRoundTrip) {
  PipelineConfig cfg;
  cfg.methods = {RebalanceMethod::kSmote, RebalanceMethod::kGanDownsample};
  cfg.rate_grid = {0.2, 0.4};
  cfg.gan_epochs = {7};
  cfg.max_m = 3;
  cfg.rebalance.smote.k_neighbors = 3;
  cfg.rebalance.gan.hidden_units = 8;
  cfg.rf.max_depth = 6;
  cfg.score.quantiles = {0.1, 0.5, 0.9};
  cfg.score.lr.tol = 1e-9;
  cfg.bootstrap.replicates = 200;
  cfg.seed = 123456789012345ULL;
  const auto back = round_trip(cfg, "config");
  EXPECT_EQ(dump_json(Json(back)), dump_json(Json(cfg)));
  EXPECT_EQ(config_hash(back), config_hash(cfg));
  EXPECT_EQ(back.seed, cfg.seed);
  EXPECT_EQ(back.rf.max_depth, 6);
}

TEST(Serialize, MissingKeysKeepDefaults) {
  const auto cfg = parse_json<PipelineConfig>(Json::parse(R"({"seed": 5})"), "config");
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.methods.size(), 7u);
  EXPECT_EQ(cfg.rate_grid, PipelineConfig{}.rate_grid);
}

TEST(Serialize, UnknownKeysAndBadValuesRejected) {
  EXPECT_THROW(parse_json<PipelineConfig>(Json::parse(R"({"sead": 5})"), "config"),
               ValidationError);
  EXPECT_THROW(parse_json<PipelineConfig>(Json::parse(R"({"methods": ["ROSE"]})"), "config"),
               ValidationError);
  EXPECT_THROW(parse_json<PipelineConfig>(Json::parse(R"({"seed": "x"})"), "config"),
               ValidationError);
}

TEST(Serialize, ConfigHashTracksContent) {
  PipelineConfig a, b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.rate_grid = {0.1, 0.2};
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Serialize, ScorecardRoundTrip) {
  Scorecard card;
  card.cutoffs.variables.push_back(
      {"age", FeatureKind::kContinuous, {50, 65.25}, interval_labels({50, 65.25})});
  card.cutoffs.variables.push_back({"sex", FeatureKind::kCategorical, {}, {"F", "M"}});
  card.table.variables.push_back({"age", interval_labels({50, 65.25}), {0, 40, 70}});
  card.table.variables.push_back({"sex", {"F", "M"}, {30, 0}});
  EXPECT_EQ(round_trip(card, "scorecard"), card);
}

TEST(Serialize, MetricReportKeepsUndefinedValues) {
  MetricReport r;
  r.threshold = 12;
  r.auc = {0.8, 0.7, 0.9, true};
  r.npv = {std::nan(""), std::nan(""), std::nan(""), false};
  r.notes = {"NPV undefined at the chosen threshold"};
  const Json j(r);
  EXPECT_TRUE(j.at("npv").at("point").is_null());
  const auto back = round_trip(r, "report");
  EXPECT_FALSE(back.npv.defined);
  EXPECT_TRUE(std::isnan(back.npv.point));
  EXPECT_EQ(back.auc.low, 0.7);
  EXPECT_EQ(back.notes, r.notes);
}

TEST(Serialize, RecordRoundTrip) {
  auto split = stratified_split(
      make_synthetic({.n = 1500, .minority_rate = 0.1, .n_informative = 2, .n_noise = 1,
                      .seed = 2}),
      {0.6, 0.2, 0.2}, 1);
  PipelineConfig cfg;
  cfg.methods = {RebalanceMethod::kDownsample};
  cfg.rate_grid = {0.05, 0.3};
  cfg.rf.n_trees = 10;
  cfg.bootstrap.replicates = 30;
  auto rec = derive(split, cfg);
  const auto derived = round_trip(rec, "record");
  EXPECT_EQ(dump_json(Json(derived)), dump_json(Json(rec)));
  EXPECT_FALSE(derived.finalized);
  EXPECT_TRUE(Json(rec).at("scorecard").is_null());

  finalize(rec, split.train, 2);
  evaluate_final(rec, split.test);
  auto back = round_trip(rec, "record");
  EXPECT_EQ(dump_json(Json(back)), dump_json(Json(rec)));
  EXPECT_EQ(back.scorecard, rec.scorecard);
  ASSERT_TRUE(back.test_report.has_value());
  // A reloaded record still refuses a second evaluation.
  EXPECT_THROW(evaluate_final(back, split.test), ValidationError);

  // A failed cell keeps its NaN AUC and error message.
  ASSERT_TRUE(std::isnan(rec.block_a[1].auc));
  EXPECT_TRUE(std::isnan(back.block_a[1].auc));
  EXPECT_EQ(back.block_a[1].error, rec.block_a[1].error);
}

TEST(Serialize, RecordWithEditedConfigIsRejected) {
  auto split = stratified_split(
      make_synthetic({.n = 1000, .minority_rate = 0.1, .n_informative = 2, .seed = 3}),
      {0.6, 0.2, 0.2}, 1);
  PipelineConfig cfg;
  cfg.methods = {RebalanceMethod::kUpsample};
  cfg.rate_grid = {0.2};
  cfg.rf.n_trees = 10;
  auto j = Json(derive(split, cfg));
  j["config"]["seed"] = 99;
  EXPECT_THROW(parse_json<PipelineRecord>(j, "record"), ValidationError);
}
