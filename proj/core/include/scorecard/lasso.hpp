#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scorecard {

struct LassoOptions {
  int n_lambda = 50;
  /// Smallest lambda as a fraction of lambda_max.
  double lambda_min_ratio = 1e-4;
  int max_outer = 100;
  int max_inner = 1000;
  /// Convergence on the largest coefficient change (standardized scale).
  double tol = 1e-7;

  void validate() const;
};

/// Column means and population standard deviations; constant columns get
/// scale 1 so they standardize to 0.
struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardization fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

/// Minimizes (1/n) sum_i [log(1 + e^eta_i) - y_i eta_i] + lambda * |beta|_1
/// with an unpenalized intercept.
struct LassoSolution {
  double intercept = 0.0;
  Eigen::VectorXd beta;
  bool converged = false;
  int iterations = 0;
};

/// Smallest lambda at which every slope is 0, for standardized `x`.
double lambda_max(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y);

/// Log-spaced, descending, from lambda_max to lambda_max * ratio.
std::vector<double> lambda_grid(double lmax, int count, double ratio);

/// Coordinate descent with soft-thresholding inside a Newton (quadratic
/// approximation) outer loop. `warm` may seed the solution.
LassoSolution lasso_logistic(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                             double lambda, const LassoOptions& options,
                             const LassoSolution* warm = nullptr);

struct LassoPath {
  std::vector<double> lambdas;
  /// Intercept first, then slopes on the original feature scale.
  std::vector<Eigen::VectorXd> coefficients;
  std::vector<bool> converged;
  std::vector<std::string> warnings;
};

/// Fits every lambda (descending, warm-started) on standardized `x` and maps
/// the solutions back to the original scale. An empty `lambdas` uses the
/// default grid.
LassoPath lasso_path(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                     std::vector<double> lambdas, const LassoOptions& options);

}  // namespace scorecard
