#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "scorecard/random.hpp"
#include "scorecard/baselines.hpp"
#include "scorecard/error.hpp"
#include "scorecard/lasso.hpp"

using namespace scorecard;

namespace {

struct Problem {
  Eigen::MatrixXd x;
  std::vector<std::uint8_t> y;
};

Problem make_problem(int n, std::uint64_t seed) {
  Rng rng(seed);
  Problem p;
  p.x.resize(n, 5);
  const double beta[] = {1.2, -0.8, 0.4, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    double eta = -1.0;
    for (int j = 0; j < 5; ++j) {
      p.x(i, j) = rng.normal() * (1.0 + j) + j;
      eta += beta[j] * (p.x(i, j) - j) / (1.0 + j);
    }
    p.y.push_back(rng.uniform01() < 1.0 / (1.0 + std::exp(-eta)));
  }
  return p;
}

int nonzero_slopes(const Eigen::VectorXd& coef) {
  int k = 0;
  for (Eigen::Index j = 1; j < coef.size(); ++j) k += coef(j) != 0.0;
  return k;
}

}  // namespace

TEST(Lasso, StandardizationUsesPopulationSd) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 5, 2, 5, 3, 5, 4, 5;
  const auto s = Standardization::fit(x);
  EXPECT_DOUBLE_EQ(s.mean(0), 2.5);
  EXPECT_DOUBLE_EQ(s.scale(0), std::sqrt(1.25));
  EXPECT_DOUBLE_EQ(s.scale(1), 1.0);
  const auto z = s.apply(x);
  EXPECT_NEAR(z.col(0).mean(), 0.0, 1e-15);
  EXPECT_EQ(z.col(1), Eigen::VectorXd::Zero(4));
}

TEST(Lasso, LambdaMaxZeroesEverySlope) {
  const auto p = make_problem(300, 1);
  const auto xs = Standardization::fit(p.x).apply(p.x);
  const double lmax = lambda_max(xs, p.y);
  const auto at_max = lasso_logistic(xs, p.y, lmax, {});
  EXPECT_TRUE(at_max.converged);
  EXPECT_LT(at_max.beta.cwiseAbs().maxCoeff(), 1e-12);
  const auto below = lasso_logistic(xs, p.y, 0.95 * lmax, {});
  EXPECT_GT(below.beta.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Lasso, GridIsLogSpaced) {
  const auto g = lambda_grid(2.0, 5, 1e-4);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 2.0);
  EXPECT_NEAR(g.back(), 2e-4, 1e-15);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_NEAR(g[k] / g[k - 1], 0.1, 1e-12);
}

TEST(Lasso, MatchesProximalGradientOracle) {
  const auto p = make_problem(250, 2);
  const auto xs = Standardization::fit(p.x).apply(p.x);
  const double lmax = lambda_max(xs, p.y);
  for (double frac : {0.5, 0.1, 0.01}) {
    const auto sol = lasso_logistic(xs, p.y, frac * lmax, {});
    ASSERT_TRUE(sol.converged);
    const auto ref = oracle::ista_lasso(xs, p.y, frac * lmax);
    EXPECT_NEAR(sol.intercept, ref(0), 1e-3);
    for (Eigen::Index j = 0; j < sol.beta.size(); ++j)
      EXPECT_NEAR(sol.beta(j), ref(j + 1), 1e-3) << "lambda fraction " << frac << " slope " << j;
  }
}

TEST(Lasso, ZeroPenaltyMatchesMaximumLikelihood) {
  const auto p = make_problem(400, 3);
  const auto path = lasso_path(p.x, p.y, {0.0}, {});
  ASSERT_TRUE(path.converged[0]);
  SparseRowMatrix design(p.x.rows(), p.x.cols() + 1);
  Eigen::MatrixXd full(p.x.rows(), p.x.cols() + 1);
  full.col(0).setOnes();
  full.rightCols(p.x.cols()) = p.x;
  design = full.sparseView();
  const auto ml = fit_logistic(design, p.y, std::vector<double>(p.y.size(), 1.0));
  for (Eigen::Index j = 0; j < ml.coefficients.size(); ++j)
    EXPECT_NEAR(path.coefficients[0](j), ml.coefficients(j), 1e-4) << j;
}

TEST(Lasso, SupportGrowsAlongPath) {
  const auto p = make_problem(300, 4);
  const auto path = lasso_path(p.x, p.y, {}, {});
  ASSERT_EQ(path.lambdas.size(), 50u);
  EXPECT_EQ(nonzero_slopes(path.coefficients.front()), 0);
  EXPECT_EQ(nonzero_slopes(path.coefficients.back()), 5);
  // Strongly separated lambdas give nested supports for this design.
  int last = 0;
  for (std::size_t k = 0; k < path.lambdas.size(); k += 7) {
    const int nz = nonzero_slopes(path.coefficients[k]);
    EXPECT_GE(nz, last);
    last = nz;
  }
}

TEST(Lasso, OriginalScaleCoefficients) {
  const auto p = make_problem(200, 5);
  const auto standard = Standardization::fit(p.x);
  const auto xs = standard.apply(p.x);
  const double lambda = 0.05 * lambda_max(xs, p.y);
  const auto path = lasso_path(p.x, p.y, {lambda}, {});
  const auto sol = lasso_logistic(xs, p.y, lambda, {});
  // Both parameterizations give the same linear predictor.
  const Eigen::VectorXd eta_std = (xs * sol.beta).array() + sol.intercept;
  const Eigen::VectorXd eta_raw =
      (p.x * path.coefficients[0].tail(5)).array() + path.coefficients[0](0);
  EXPECT_LT((eta_std - eta_raw).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lasso, Validation) {
  const auto p = make_problem(50, 6);
  EXPECT_THROW(lasso_path(p.x, p.y, {0.1, 0.2}, {}), ValidationError);
  EXPECT_THROW(lasso_path(p.x, p.y, {-0.1}, {}), ValidationError);
  LassoOptions bad;
  bad.lambda_min_ratio = 0;
  EXPECT_THROW(lasso_path(p.x, p.y, {}, bad), ValidationError);
  const std::vector<std::uint8_t> one_class(50, 0);
  EXPECT_THROW(lasso_path(p.x, one_class, {}, {}), ValidationError);
}
