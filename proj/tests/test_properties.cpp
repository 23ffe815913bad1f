#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "scorecard/random.hpp"
#include "scorecard/categorize.hpp"
#include "scorecard/evalmetrics.hpp"
#include "scorecard/rebalance.hpp"
#include "scorecard/scoring.hpp"

using namespace scorecard;

// Randomized checks of invariants that must hold for any input.

TEST(Property, PlanArithmetic) {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const long long n_pos = 1 + static_cast<long long>(rng.uniform_index(500));
    const long long n_neg = n_pos + 1 + static_cast<long long>(rng.uniform_index(20000));
    const double p = static_cast<double>(n_pos) / (n_pos + n_neg);
    const double rate = p + (0.5 - p) * rng.uniform_open01();
    for (auto m : kAllMethods) {
      const auto plan = make_plan(m, n_pos, n_neg, rate);
      EXPECT_EQ(plan.target_pos, plan.alpha * n_pos + plan.remainder);
      EXPECT_GE(plan.remainder, 0);
      EXPECT_LT(plan.remainder, n_pos);
      EXPECT_GE(plan.target_pos, n_pos);
      EXPECT_LE(plan.target_neg, n_neg);
      const double achieved =
          static_cast<double>(plan.target_pos) / (plan.target_pos + plan.target_neg);
      // Rounding one count by at most a half row moves the rate by less than 1 / N'.
      EXPECT_NEAR(achieved, rate, 1.0 / (plan.target_pos + plan.target_neg) + 1e-12)
          << method_name(m) << " " << n_pos << "/" << n_neg << " -> " << rate;
    }
  }
}

TEST(Property, RebalancedDataMatchPlan) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n_pos = 6 + rng.uniform_index(30);
    const auto n_neg = 6 * n_pos + rng.uniform_index(200);
    auto ds = make_synthetic({.n = n_pos + n_neg,
                              .minority_rate = static_cast<double>(n_pos) / (n_pos + n_neg),
                              .n_informative = 2, .n_noise = 1, .seed = trial + 10ULL});
    const double p = ds.minority_rate();
    const double rate = std::min(0.5, p + 0.05 + 0.3 * rng.uniform01());
    for (auto m : {RebalanceMethod::kDownsample, RebalanceMethod::kUpsample,
                   RebalanceMethod::kSmote, RebalanceMethod::kUpsampleDownsample,
                   RebalanceMethod::kSmoteDownsample}) {
      const auto plan = make_plan(m, ds, rate);
      const auto out = rebalance(ds, plan, {.smote = {.k_neighbors = 3}}, trial);
      EXPECT_EQ(static_cast<long long>(out.num_positive()), plan.target_pos);
      EXPECT_EQ(static_cast<long long>(out.num_negative()), plan.target_neg);
      // Majority rows are never synthesized.
      std::multiset<double> source;
      for (auto r : ds.negative_rows()) source.insert(ds.value(r, 0));
      for (auto r : out.negative_rows()) {
        auto it = source.find(out.value(r, 0));
        ASSERT_NE(it, source.end());
        source.erase(it);
      }
    }
  }
}

TEST(Property, ScoreTablesAreBounded) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    CategoryModel model;
    std::vector<std::vector<std::string>> levels;
    const int vars = 1 + static_cast<int>(rng.uniform_index(12));
    for (int j = 0; j < vars; ++j) {
      model.variables.push_back("v" + std::to_string(j));
      const int k = 1 + static_cast<int>(rng.uniform_index(6));
      std::vector<double> c{0.0};
      std::vector<std::string> names{"a"};
      for (int l = 1; l < k; ++l) {
        c.push_back(rng.normal() * 2.0);
        names.push_back(std::string(1, static_cast<char>('a' + l)));
      }
      model.level_coefficients.push_back(c);
      levels.push_back(names);
    }
    const int max_total = 10 + static_cast<int>(rng.uniform_index(200));
    const auto table = assign_scores(model, levels, max_total).table;
    EXPECT_LE(table.max_score(), max_total);
    for (std::size_t j = 0; j < table.variables.size(); ++j) {
      const auto& pts = table.variables[j].points;
      EXPECT_EQ(*std::min_element(pts.begin(), pts.end()), 0);
      // Points preserve the order of the coefficients.
      const auto& c = model.level_coefficients[j];
      for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = 0; b < c.size(); ++b)
          if (c[a] < c[b]) EXPECT_LE(pts[a], pts[b]);
    }
  }
}

TEST(Property, AucAgreesWithOracleUnderTies) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 2 + rng.uniform_index(60);
    std::vector<double> s;
    std::vector<std::uint8_t> y;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(static_cast<double>(rng.uniform_index(5)));
      y.push_back(rng.uniform01() < 0.3);
    }
    y[0] = 1;
    y[1] = 0;
    const double auc = roc_auc(s, y).auc;
    EXPECT_NEAR(auc, oracle::pairwise_auc(s, y), 1e-12);
    EXPECT_GE(auc, 0.0);
    EXPECT_LE(auc, 1.0);
  }
}

TEST(Property, RocCurveIsMonotone) {
  Rng rng(5);
  std::vector<double> s;
  std::vector<std::uint8_t> y;
  for (int i = 0; i < 500; ++i) {
    y.push_back(rng.uniform01() < 0.2);
    s.push_back(std::round(rng.normal() * 4 + y.back() * 3));
  }
  const auto curve = roc_auc(s, y);
  EXPECT_EQ(curve.points.front().sensitivity, 1.0);
  EXPECT_EQ(curve.points.front().fpr, 1.0);
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    EXPECT_LT(curve.points[k - 1].threshold, curve.points[k].threshold);
    EXPECT_GE(curve.points[k - 1].sensitivity, curve.points[k].sensitivity);
    EXPECT_GE(curve.points[k - 1].fpr, curve.points[k].fpr);
  }
}

TEST(Property, StratifiedSplitPartitionsEachClass) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 30 + rng.uniform_index(3000);
    std::vector<std::uint8_t> y(n);
    std::size_t pos = 0;
    for (auto& v : y) pos += (v = rng.uniform01() < 0.1);
    if (pos < 10) continue;
    const std::vector<double> ratios{0.6, 0.2, 0.2};
    const auto parts = stratified_partition(y, ratios, trial);
    std::vector<int> seen(n, 0);
    for (const auto& part : parts) {
      EXPECT_TRUE(std::is_sorted(part.begin(), part.end()));
      for (auto r : part) ++seen[r];
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    for (std::size_t k = 1; k < parts.size(); ++k) {
      std::size_t part_pos = 0;
      for (auto r : parts[k]) part_pos += y[r];
      EXPECT_EQ(part_pos, static_cast<std::size_t>(std::floor(ratios[k] * pos)));
    }
  }
}

TEST(Property, QuantileCutsLeaveNoEmptyInterval) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v;
    const auto n = 5 + rng.uniform_index(200);
    const auto distinct = 1 + rng.uniform_index(8);
    for (std::size_t i = 0; i < n; ++i)
      v.push_back(trial % 2 ? static_cast<double>(rng.uniform_index(distinct)) : rng.normal());
    const auto cuts = quantile_cuts(v, kDefaultQuantiles);
    VariableCuts vc{"x", FeatureKind::kContinuous, cuts, interval_labels(cuts)};
    std::vector<int> counts(vc.num_levels(), 0);
    for (double x : v) ++counts[vc.level_of(x)];
    for (int c : counts) EXPECT_GT(c, 0);
  }
}

TEST(Property, PercentileIsMonotone) {
  Rng rng(8);
  std::vector<double> v;
  for (int i = 0; i < 97; ++i) v.push_back(rng.normal());
  double last = -1e300;
  for (int k = 0; k <= 100; ++k) {
    const double q = percentile(v, k / 100.0);
    EXPECT_GE(q, last);
    EXPECT_EQ(q, oracle::sorted_percentile(v, k / 100.0));
    last = q;
  }
}
