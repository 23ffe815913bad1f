#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "scorecard/dataset.hpp"

namespace scorecard {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LogisticOptions {
  int max_iter = 50;
  /// Stop when max_j |delta beta_j| / max(1, |beta_j|) falls below tol.
  double tol = 1e-8;
  /// Ridge penalty applied from the start (non-intercept terms only).
  double ridge = 0.0;
  /// Penalty used when the design is rank deficient or separation is detected.
  double fallback_ridge = 1e-6;
  /// Coefficient magnitude treated as evidence of separation.
  double separation_threshold = 15.0;
};

struct LogisticFit {
  Eigen::VectorXd coefficients;  // intercept first
  int iterations = 0;
  bool converged = false;
  /// Penalty actually used (0 for a plain maximum-likelihood fit).
  double ridge = 0.0;
  std::vector<std::string> warnings;
};

/// Maximizes sum_i w_i [y_i eta_i - log(1 + e^eta_i)] - wbar ridge/2 |beta_-0|^2,
/// wbar being the mean weight,
/// by IRLS (Newton) with step halving. Column 0 of `design` must be the
/// intercept. Falls back to `fallback_ridge` on rank deficiency, separation
/// or non-convergence; throws NumericalError if the penalized fit also fails.
LogisticFit fit_logistic(const SparseRowMatrix& design, std::span<const std::uint8_t> labels,
                         std::span<const double> weights, const LogisticOptions& options = {});

/// Column layout of a design built from a dataset.
struct DesignLayout {
  std::vector<std::string> variables;
  /// First design column of each variable (intercept is column 0).
  std::vector<int> first_column;
  /// Design columns per variable: 1 for continuous, levels - 1 for
  /// categorical (level 0 is the reference).
  std::vector<int> width;
  int num_columns = 1;
};

/// Intercept, then raw continuous columns and indicator columns for the
/// non-reference levels of categorical features.
SparseRowMatrix build_design(const Dataset& data, DesignLayout* layout = nullptr);

/// Minority rows get `minority_weight`, majority rows 1.
std::vector<double> class_weights(const Dataset& data, double minority_weight);

/// Weighted LR on a categorized dataset, expressed per category.
struct CategoryModel {
  double intercept = 0.0;
  std::vector<std::string> variables;
  /// Per variable, one coefficient per level; the reference level is 0.
  std::vector<std::vector<double>> level_coefficients;
  LogisticFit fit;
};

/// Requires every feature of `categorized` to be categorical.
CategoryModel fit_weighted_lr(const Dataset& categorized, double minority_weight,
                              const LogisticOptions& options = {});

/// Linear predictor for each row given coefficients laid out by build_design.
std::vector<double> linear_predictor(const SparseRowMatrix& design,
                                     const Eigen::VectorXd& coefficients);

}  // namespace scorecard
