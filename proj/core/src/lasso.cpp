#include "scorecard/lasso.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scorecard/error.hpp"

namespace scorecard {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

void LassoOptions::validate() const {
  if (n_lambda < 1) throw ValidationError("LASSO needs at least one lambda");
  if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0))
    throw ValidationError("lambda_min_ratio must be in (0, 1)");
  if (max_outer < 1 || max_inner < 1 || !(tol > 0.0))
    throw ValidationError("LASSO iteration limits and tolerance must be positive");
}

Standardization Standardization::fit(const Eigen::MatrixXd& x) {
  Standardization s;
  const double n = static_cast<double>(x.rows());
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().sum() / n;
    s.scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardization::apply(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

double lambda_max(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y) {
  const double n = static_cast<double>(y.size());
  double ybar = 0.0;
  for (auto v : y) ybar += v;
  ybar /= n;
  double lmax = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      g += x(i, j) * (y[static_cast<std::size_t>(i)] - ybar);
    lmax = std::max(lmax, std::abs(g) / n);
  }
  return lmax;
}

std::vector<double> lambda_grid(double lmax, int count, double ratio) {
  std::vector<double> grid;
  if (count == 1) return {lmax};
  for (int k = 0; k < count; ++k)
    grid.push_back(lmax * std::pow(ratio, static_cast<double>(k) / (count - 1)));
  return grid;
}

LassoSolution lasso_logistic(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                             double lambda, const LassoOptions& options,
                             const LassoSolution* warm) {
  const Eigen::Index n = x.rows(), p = x.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  LassoSolution sol;
  if (warm) {
    sol = *warm;
  } else {
    sol.beta = Eigen::VectorXd::Zero(p);
    double ybar = 0.0;
    for (auto v : y) ybar += v;
    ybar /= static_cast<double>(n);
    sol.intercept = std::log(ybar / (1.0 - ybar));
  }
  sol.converged = false;
  sol.iterations = 0;

  Eigen::VectorXd w(n), z(n), eta(n);
  for (int outer = 0; outer < options.max_outer; ++outer) {
    ++sol.iterations;
    eta = (x * sol.beta).array() + sol.intercept;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mu = sigmoid(eta(i));
      w(i) = std::max(mu * (1.0 - mu), 1e-5);
      z(i) = eta(i) + (y[static_cast<std::size_t>(i)] - mu) / w(i);
    }
    const double old_intercept = sol.intercept;
    const Eigen::VectorXd old_beta = sol.beta;

    // Weighted least squares with L1 penalty by cyclic coordinate descent.
    Eigen::VectorXd resid = z - eta;
    const double wsum = w.sum() * inv_n;
    Eigen::VectorXd curvature(p);
    for (Eigen::Index j = 0; j < p; ++j)
      curvature(j) = (w.array() * x.col(j).array().square()).sum() * inv_n;
    bool inner_done = false;
    for (int inner = 0; inner < options.max_inner && !inner_done; ++inner) {
      double change = 0.0;
      const double d0 = (w.array() * resid.array()).sum() * inv_n / wsum;
      sol.intercept += d0;
      resid.array() -= d0;
      change = std::max(change, std::abs(d0));
      for (Eigen::Index j = 0; j < p; ++j) {
        if (curvature(j) <= 0.0) continue;
        const double old = sol.beta(j);
        const double rho =
            (w.array() * x.col(j).array() * resid.array()).sum() * inv_n + curvature(j) * old;
        const double updated = soft_threshold(rho, lambda) / curvature(j);
        if (updated != old) {
          resid -= (updated - old) * x.col(j);
          sol.beta(j) = updated;
          change = std::max(change, std::abs(updated - old));
        }
      }
      inner_done = change < options.tol;
    }
    double outer_change = std::abs(sol.intercept - old_intercept);
    if (p > 0) outer_change = std::max(outer_change, (sol.beta - old_beta).cwiseAbs().maxCoeff());
    if (!std::isfinite(outer_change)) break;
    if (outer_change < options.tol) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

LassoPath lasso_path(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                     std::vector<double> lambdas, const LassoOptions& options) {
  options.validate();
  if (x.rows() != static_cast<Eigen::Index>(y.size()))
    throw ValidationError("lasso_path: design and labels differ in length");
  std::size_t pos = 0;
  for (auto v : y) pos += v ? 1 : 0;
  if (pos == 0 || pos == y.size()) throw ValidationError("lasso_path: both classes required");

  const auto standard = Standardization::fit(x);
  const Eigen::MatrixXd xs = standard.apply(x);
  if (lambdas.empty())
    lambdas = lambda_grid(lambda_max(xs, y), options.n_lambda, options.lambda_min_ratio);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] >= 0.0)) throw ValidationError("lambda values must be non-negative");
    if (k && lambdas[k] > lambdas[k - 1])
      throw ValidationError("lambda grid must be descending");
  }

  LassoPath path;
  LassoSolution current;
  bool have_warm = false;
  for (double lambda : lambdas) {
    auto sol = lasso_logistic(xs, y, lambda, options, have_warm ? &current : nullptr);
    path.lambdas.push_back(lambda);
    path.converged.push_back(sol.converged);
    if (!sol.converged)
      path.warnings.push_back(
          fmt::format("LASSO did not converge at lambda {:.6g}; skipped", lambda));
    Eigen::VectorXd coef(x.cols() + 1);
    coef.tail(x.cols()) = sol.beta.cwiseQuotient(standard.scale);
    coef(0) = sol.intercept - standard.mean.dot(coef.tail(x.cols()));
    path.coefficients.push_back(std::move(coef));
    if (sol.converged) {
      current = std::move(sol);
      have_warm = true;
    }
  }
  return path;
}

}  // namespace scorecard
