#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "scorecard/random.hpp"
#include "scorecard/error.hpp"
#include "scorecard/evalmetrics.hpp"

using namespace scorecard;

namespace {

struct Sample {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
};

Sample noisy_sample(std::size_t n, double rate, double shift, std::uint64_t seed,
                    bool integer_scores = false) {
  Rng rng(seed);
  Sample s;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = rng.uniform01() < rate;
    double v = rng.normal() + (pos ? shift : 0.0);
    if (integer_scores) v = std::round(v * 3);
    s.scores.push_back(v);
    s.labels.push_back(pos);
  }
  return s;
}

}  // namespace

TEST(Auc, MatchesPairwiseOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = noisy_sample(300, 0.2, 0.8, seed, seed % 2 == 1);
    EXPECT_NEAR(roc_auc(s.scores, s.labels).auc, oracle::pairwise_auc(s.scores, s.labels), 1e-12);
  }
}

TEST(Auc, AllTiedIsHalf) {
  const std::vector<double> s(10, 3.0);
  const std::vector<std::uint8_t> y{1, 0, 0, 1, 0, 0, 0, 0, 1, 0};
  const auto curve = roc_auc(s, y);
  EXPECT_DOUBLE_EQ(curve.auc, 0.5);
  EXPECT_EQ(curve.points.size(), 1u);
}

TEST(Auc, Invariances) {
  const auto s = noisy_sample(200, 0.3, 1.0, 7, true);
  const double base = roc_auc(s.scores, s.labels).auc;
  std::vector<double> transformed, flipped;
  for (double v : s.scores) {
    transformed.push_back(std::exp(v / 5.0) * 3.0 + 1.0);
    flipped.push_back(-v);
  }
  EXPECT_NEAR(roc_auc(transformed, s.labels).auc, base, 1e-12);
  EXPECT_NEAR(roc_auc(flipped, s.labels).auc, 1.0 - base, 1e-12);
  auto ps = s.scores;
  auto py = s.labels;
  std::reverse(ps.begin(), ps.end());
  std::reverse(py.begin(), py.end());
  EXPECT_NEAR(roc_auc(ps, py).auc, base, 1e-12);
}

TEST(Auc, RejectsBadInput) {
  EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<std::uint8_t>{1, 1}),
               ValidationError);
  EXPECT_THROW(roc_auc(std::vector<double>{1, NAN}, std::vector<std::uint8_t>{1, 0}),
               ValidationError);
  EXPECT_THROW(roc_auc(std::vector<double>{1}, std::vector<std::uint8_t>{1, 0}), ValidationError);
}

TEST(Threshold, ClosestToTopLeft) {
  const auto curve = roc_auc(std::vector<double>{0, 1, 2}, std::vector<std::uint8_t>{0, 1, 1});
  ASSERT_EQ(curve.points.size(), 3u);
  EXPECT_EQ(optimal_threshold(curve), 1.0);
}

TEST(Threshold, MatchesBruteForce) {
  const auto s = noisy_sample(150, 0.25, 1.2, 9);
  const double t = optimal_threshold(roc_auc(s.scores, s.labels));
  double best = 1e300;
  double best_t = 0;
  auto sorted = s.scores;
  std::sort(sorted.begin(), sorted.end());
  for (double c : sorted) {
    const auto m = confusion_metrics(s.scores, s.labels, c);
    const double d = std::pow(1 - m.sensitivity, 2) + std::pow(1 - m.specificity, 2);
    if (d < best - 1e-12) {
      best = d;
      best_t = c;
    }
  }
  EXPECT_EQ(t, best_t);
}

TEST(Threshold, TieGoesToLowerFalsePositiveRate) {
  // Cutting at 1 gives (sens 1, fpr .5); cutting at 2 gives (sens .5, fpr 0).
  const auto curve =
      roc_auc(std::vector<double>{0, 1, 2, 3}, std::vector<std::uint8_t>{0, 1, 0, 1});
  EXPECT_EQ(optimal_threshold(curve), 3.0);
}

TEST(Confusion, EightRowFixture) {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  const std::vector<std::uint8_t> y{0, 0, 1, 0, 1, 1, 0, 1};
  const auto m = confusion_metrics(s, y, 0.35);
  EXPECT_EQ(m.tp, 3u);
  EXPECT_EQ(m.fp, 2u);
  EXPECT_EQ(m.tn, 2u);
  EXPECT_EQ(m.fn, 1u);
  EXPECT_DOUBLE_EQ(m.sensitivity, 0.75);
  EXPECT_DOUBLE_EQ(m.specificity, 0.5);
  EXPECT_DOUBLE_EQ(m.balanced_accuracy, 0.625);
  EXPECT_DOUBLE_EQ(*m.npv, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*m.ppv, 0.6);
  // Score equal to the threshold counts as positive.
  EXPECT_EQ(confusion_metrics(s, y, 0.4).fp, 2u);
  EXPECT_EQ(confusion_metrics(s, y, 0.4).tn, 2u);
}

TEST(Confusion, UndefinedPredictiveValues) {
  const std::vector<double> s{1, 2, 3};
  const std::vector<std::uint8_t> y{0, 1, 1};
  EXPECT_FALSE(confusion_metrics(s, y, 0).npv.has_value());
  EXPECT_FALSE(confusion_metrics(s, y, 5).ppv.has_value());
}

TEST(Confusion, BalancedAccuracyIsMean) {
  EXPECT_DOUBLE_EQ(balanced_accuracy(0.700, 0.696), 0.698);
}

TEST(Percentile, MatchesSortOracle) {
  Rng rng(3);
  std::vector<double> v;
  for (int i = 0; i < 30; ++i) v.push_back(rng.normal());
  for (double p : {0.0, 0.025, 0.1, 0.5, 0.9, 0.975, 1.0})
    EXPECT_EQ(percentile(v, p), oracle::sorted_percentile(v, p)) << p;
  EXPECT_EQ(percentile({5, 1, 3, 2, 4}, 0.4), 2.0);
  EXPECT_THROW(percentile({}, 0.5), ValidationError);
}

TEST(Bootstrap, DeterministicAndOrderIndependent) {
  const auto s = noisy_sample(200, 0.2, 1.0, 4);
  BootstrapOptions opt{.replicates = 200, .seed = 17};
  const MetricFunction auc_only = [](auto sc, auto y) {
    return std::vector<double>{roc_auc(sc, y).auc};
  };
  const auto a = bootstrap_ci(auc_only, s.scores, s.labels, opt);
  const auto b = bootstrap_ci(auc_only, s.scores, s.labels, opt);
  EXPECT_EQ(a.replicates, b.replicates);
  ASSERT_EQ(a.replicates[0].size(), 200u);
  EXPECT_EQ(a.intervals[0].low, oracle::sorted_percentile(a.replicates[0], 0.025));
  EXPECT_EQ(a.intervals[0].high, oracle::sorted_percentile(a.replicates[0], 0.975));

  // A shorter run reproduces the leading replicates exactly.
  opt.replicates = 50;
  const auto c = bootstrap_ci(auc_only, s.scores, s.labels, opt);
  EXPECT_TRUE(std::equal(c.replicates[0].begin(), c.replicates[0].end(), a.replicates[0].begin()));
}

TEST(Bootstrap, RedrawsSingleClassResamples) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<std::uint8_t> y{0, 0, 0, 1};
  const MetricFunction auc_only = [](auto sc, auto yy) {
    return std::vector<double>{roc_auc(sc, yy).auc};
  };
  const auto r = bootstrap_ci(auc_only, s, y, {.replicates = 400, .seed = 1});
  EXPECT_GT(r.redraws, 0);
  EXPECT_EQ(r.replicates[0].size(), 400u);
}

TEST(Bootstrap, FailsWhenMostResamplesAreSingleClass) {
  // With two rows half of all resamples hold one class, so runs straddle the limit.
  const std::vector<double> s{0.2, 0.7};
  const std::vector<std::uint8_t> y{0, 1};
  const MetricFunction auc_only = [](auto sc, auto yy) {
    return std::vector<double>{roc_auc(sc, yy).auc};
  };
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    try {
      bootstrap_ci(auc_only, s, y, {.replicates = 100, .seed = seed});
    } catch (const DataError&) {
      ++failures;
    }
  }
  EXPECT_GT(failures, 0);
  EXPECT_LT(failures, 20);
}

TEST(Evaluate, ReportFields) {
  const auto s = noisy_sample(400, 0.15, 1.5, 5);
  const auto r = evaluate_scores(s.scores, s.labels, {.replicates = 300, .seed = 2});
  EXPECT_NEAR(r.auc.point, oracle::pairwise_auc(s.scores, s.labels), 1e-12);
  EXPECT_LE(r.auc.low, r.auc.point);
  EXPECT_GE(r.auc.high, r.auc.point);
  EXPECT_EQ(r.n_bootstrap, 300);
  EXPECT_EQ(r.seed, 2u);
  EXPECT_FALSE(r.degenerate);
  const auto m = confusion_metrics(s.scores, s.labels, r.threshold);
  EXPECT_EQ(r.sensitivity.point, m.sensitivity);
  EXPECT_EQ(r.balanced_accuracy.point, (m.sensitivity + m.specificity) / 2);
  EXPECT_EQ(r.ppv.point, *m.ppv);
}

TEST(Evaluate, DegenerateScores) {
  const std::vector<double> s(40, 1.0);
  std::vector<std::uint8_t> y(40, 0);
  for (int i = 0; i < 10; ++i) y[i] = 1;
  const auto r = evaluate_scores(s, y, {.replicates = 50});
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.auc.point, 0.5);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Format, EstimatesAndRows) {
  EXPECT_EQ(format_estimate({0.7234, 0.6631, 0.7829, true}), "0.723 (0.663-0.783)");
  EXPECT_EQ(format_estimate({0, 0, 0, false}), "NA");
  MetricReport r;
  r.threshold = 42;
  r.auc = {0.8, 0.75, 0.85, true};
  const auto row = tsv_row("AutoScore", 6, r);
  EXPECT_EQ(row.substr(0, 25), "AutoScore\t6\t42\t0.800 (0.7");
  const auto header = tsv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), '\t'),
            std::count(header.begin(), header.end(), '\t'));
}
