#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "scorecard/random.hpp"
#include "scorecard/categorize.hpp"
#include "scorecard/error.hpp"
#include "scorecard/logistic.hpp"
#include "scorecard/rebalance.hpp"
#include "scorecard/scoring.hpp"

using namespace scorecard;

namespace {

Eigen::MatrixXd dense(const SparseRowMatrix& m) { return Eigen::MatrixXd(m); }

std::vector<std::uint8_t> labels_of(const Dataset& ds) {
  return {ds.labels().begin(), ds.labels().end()};
}

Dataset logistic_data(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v;
  std::vector<std::uint8_t> y;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    const double eta = -1.0 + 0.8 * a - 0.5 * b + 0.2 * c;
    y.push_back(rng.uniform01() < 1.0 / (1.0 + std::exp(-eta)));
    v.insert(v.end(), {a, b, c});
  }
  return Dataset({FeatureSpec::continuous("a"), FeatureSpec::continuous("b"),
                  FeatureSpec::continuous("c")},
                 v, y);
}

}  // namespace

TEST(Design, LayoutAndIndicators) {
  Dataset ds({FeatureSpec::continuous("x"), FeatureSpec::categorical("g", {"a", "b", "c"})},
             {1.5, 0, 2.5, 2, -1, 1}, {0, 1, 1});
  DesignLayout layout;
  const auto m = dense(build_design(ds, &layout));
  ASSERT_EQ(m.cols(), 4);
  EXPECT_EQ(layout.num_columns, 4);
  EXPECT_EQ(layout.first_column, (std::vector<int>{1, 2}));
  EXPECT_EQ(layout.width, (std::vector<int>{1, 2}));
  Eigen::MatrixXd expected(3, 4);
  expected << 1, 1.5, 0, 0,
              1, 2.5, 0, 1,
              1, -1, 1, 0;
  EXPECT_EQ(m, expected);
}

TEST(Logistic, MatchesGradientAscentOracle) {
  const auto ds = logistic_data(400, 1);
  const auto design = build_design(ds);
  const std::vector<double> w(ds.num_rows(), 1.0);
  const auto fit = fit_logistic(design, ds.labels(), w);
  EXPECT_TRUE(fit.converged);
  EXPECT_EQ(fit.ridge, 0.0);
  const auto ref = oracle::gradient_ascent_logistic(dense(design), labels_of(ds), w, 1e-9);
  for (Eigen::Index j = 0; j < ref.size(); ++j)
    EXPECT_NEAR(fit.coefficients(j), ref(j), 1e-4) << "coefficient " << j;
}

TEST(Logistic, WeightedMatchesOracle) {
  const auto ds = logistic_data(300, 2);
  const auto design = build_design(ds);
  const auto w = class_weights(ds, 4.0);
  const auto fit = fit_logistic(design, ds.labels(), w);
  const auto ref = oracle::gradient_ascent_logistic(dense(design), labels_of(ds), w, 1e-9);
  for (Eigen::Index j = 0; j < ref.size(); ++j) EXPECT_NEAR(fit.coefficients(j), ref(j), 1e-4);
}

TEST(Logistic, CommonWeightScaleIsIrrelevant) {
  const auto ds = logistic_data(300, 3);
  const auto design = build_design(ds);
  auto w = class_weights(ds, 3.0);
  const auto a = fit_logistic(design, ds.labels(), w);
  for (double& v : w) v *= 7.5;
  const auto b = fit_logistic(design, ds.labels(), w);
  EXPECT_LT((a.coefficients - b.coefficients).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Logistic, UnitWeightEqualsUnweighted) {
  const auto raw = logistic_data(500, 4);
  const std::vector<std::string> names{"a", "b"};
  const auto cat = categorize(raw, names, kDefaultQuantiles);
  const auto model = fit_weighted_lr(cat.data, 1.0);
  const std::vector<double> ones(raw.num_rows(), 1.0);
  const auto plain = fit_logistic(build_design(cat.data), cat.data.labels(), ones);
  EXPECT_LT((model.fit.coefficients - plain.coefficients).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_DOUBLE_EQ(model.intercept, plain.coefficients(0));
  ASSERT_EQ(model.level_coefficients.size(), 2u);
  EXPECT_EQ(model.level_coefficients[0].size(), cat.cutoffs.variables[0].num_levels());
  EXPECT_EQ(model.level_coefficients[0][0], 0.0);
  EXPECT_DOUBLE_EQ(model.level_coefficients[0][1], plain.coefficients(1));
}

TEST(Logistic, SeparationGivesFiniteCoefficients) {
  Dataset ds({FeatureSpec::continuous("x")}, {1, 2, 3, 4, 5, 6}, {0, 0, 0, 1, 1, 1});
  const std::vector<double> w(6, 1.0);
  const auto fit = fit_logistic(build_design(ds), ds.labels(), w);
  EXPECT_TRUE(fit.coefficients.allFinite());
  EXPECT_GT(fit.ridge, 0.0);
  EXPECT_FALSE(fit.warnings.empty());
  EXPECT_GT(fit.coefficients(1), 0.0);
}

TEST(Logistic, RankDeficientDesignUsesRidge) {
  Dataset ds({FeatureSpec::continuous("x"), FeatureSpec::continuous("x_copy")},
             {1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6}, {0, 1, 0, 1, 1, 0});
  const std::vector<double> w(6, 1.0);
  const auto fit = fit_logistic(build_design(ds), ds.labels(), w);
  EXPECT_GT(fit.ridge, 0.0);
  EXPECT_TRUE(fit.coefficients.allFinite());
  EXPECT_NEAR(fit.coefficients(1), fit.coefficients(2), 1e-6);
}

TEST(Logistic, InputValidation) {
  Dataset ds({FeatureSpec::continuous("x")}, {1, 2, 3}, {0, 1, 0});
  EXPECT_THROW(fit_logistic(build_design(ds), ds.labels(), std::vector<double>{1, 1}),
               ValidationError);
  EXPECT_THROW(fit_logistic(build_design(ds), ds.labels(), std::vector<double>{1, -1, 1}),
               ValidationError);
  EXPECT_THROW(fit_weighted_lr(ds, 1.0), ValidationError);
}

TEST(Logistic, LinearPredictor) {
  Dataset ds({FeatureSpec::continuous("x")}, {1, 2, 3}, {0, 1, 0});
  Eigen::VectorXd beta(2);
  beta << 0.5, -2;
  EXPECT_EQ(linear_predictor(build_design(ds), beta), (std::vector<double>{-1.5, -3.5, -5.5}));
}

TEST(Logistic, ClassWeights) {
  Dataset ds({FeatureSpec::continuous("x")}, {1, 2, 3}, {0, 1, 0});
  EXPECT_EQ(class_weights(ds, 9.0), (std::vector<double>{1, 9, 1}));
}

TEST(FitLogistic, RareEventScorecardConverges) {
  // Up-sampled rare events leave some categories without positives; the
  // penalized refit is badly conditioned but must still be accepted once it
  // stops improving.
  const auto full = make_synthetic({.n = 40404, .minority_rate = 0.01, .n_informative = 5,
                                    .n_noise = 16, .effect_size = 1.0, .seed = 1});
  const auto train = stratified_split(full, {0.6, 0.2, 0.2}, 0).train;
  const auto ds = upsample(train, make_plan(RebalanceMethod::kUpsample, train, 0.3), 5);
  const std::vector<std::string> names{"signal_1", "signal_2", "signal_3", "signal_4",
                                       "signal_5"};
  ScoreConfig cfg;
  cfg.sample_weight = 2.0;
  const auto model = build_scorecard(ds, names, cfg);
  EXPECT_TRUE(model.model.fit.converged);
  EXPECT_GT(model.model.fit.ridge, 0.0);
  EXPECT_TRUE(model.model.fit.coefficients.allFinite());
}
