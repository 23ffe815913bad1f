#pragma once

#include <span>
#include <string>
#include <vector>

#include "scorecard/dataset.hpp"
#include "scorecard/evalmetrics.hpp"
#include "scorecard/forest.hpp"
#include "scorecard/lasso.hpp"
#include "scorecard/logistic.hpp"

namespace scorecard {

struct BaselineResult {
  std::string name;
  int m = 0;
  MetricReport report;
  std::vector<std::string> selected;
  std::vector<std::string> warnings;
};

struct BaselineConfig {
  RfConfig rf;
  LogisticOptions lr;
  LassoOptions lasso;
  BootstrapOptions bootstrap;
};

/// Dense design without the intercept column (see build_design).
Eigen::MatrixXd dense_features(const Dataset& data);

/// Unweighted logistic regression on every (uncategorized) feature.
BaselineResult full_lr(const Dataset& train, const Dataset& test, const BaselineConfig& cfg);

/// L1-penalized logistic regression; lambda chosen by validation AUC, the
/// larger lambda winning ties.
BaselineResult lasso_lr(const Dataset& train, const Dataset& validation, const Dataset& test,
                        const BaselineConfig& cfg, std::vector<double> lambdas = {});

/// Random forest on `variables` (all features when empty).
BaselineResult rf_classifier(std::string name, const Dataset& train, const Dataset& test,
                             std::span<const std::string> variables, const BaselineConfig& cfg);

}  // namespace scorecard
