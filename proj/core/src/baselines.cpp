#include "scorecard/baselines.hpp"

#include <fmt/format.h>

#include "scorecard/error.hpp"

namespace scorecard {

Eigen::MatrixXd dense_features(const Dataset& data) {
  const auto design = build_design(data);
  const Eigen::MatrixXd full(design);
  return full.rightCols(full.cols() - 1);
}

BaselineResult full_lr(const Dataset& train, const Dataset& test, const BaselineConfig& cfg) {
  BaselineResult out;
  out.name = "Full LR";
  out.selected = train.feature_names();
  out.m = static_cast<int>(out.selected.size());
  const auto design = build_design(train);
  const std::vector<double> weights(train.num_rows(), 1.0);
  const auto fit = fit_logistic(design, train.labels(), weights, cfg.lr);
  out.warnings = fit.warnings;
  const auto scores = linear_predictor(build_design(test.select_features(out.selected)),
                                       fit.coefficients);
  out.report = evaluate_scores(scores, test.labels(), cfg.bootstrap);
  return out;
}

BaselineResult lasso_lr(const Dataset& train, const Dataset& validation, const Dataset& test,
                        const BaselineConfig& cfg, std::vector<double> lambdas) {
  BaselineResult out;
  out.name = "LASSO";
  const auto names = train.feature_names();
  DesignLayout layout;
  build_design(train, &layout);
  const auto path = lasso_path(dense_features(train), train.labels(), std::move(lambdas), cfg.lasso);
  out.warnings = path.warnings;

  const auto vdesign = build_design(validation.select_features(names));
  std::size_t best = path.lambdas.size();
  double best_auc = -1.0;
  for (std::size_t k = 0; k < path.lambdas.size(); ++k) {
    if (!path.converged[k]) continue;
    const auto scores = linear_predictor(vdesign, path.coefficients[k]);
    const double auc = roc_auc(scores, validation.labels()).auc;
    if (auc > best_auc + 1e-12) {
      best_auc = auc;
      best = k;
    }
  }
  if (best == path.lambdas.size())
    throw NumericalError("LASSO did not converge at any lambda");

  const auto& coef = path.coefficients[best];
  for (std::size_t j = 0; j < layout.variables.size(); ++j) {
    bool nonzero = false;
    for (int k = 0; k < layout.width[j]; ++k)
      nonzero = nonzero || coef(layout.first_column[j] + k) != 0.0;
    if (nonzero) out.selected.push_back(layout.variables[j]);
  }
  out.m = static_cast<int>(out.selected.size());
  const auto scores = linear_predictor(build_design(test.select_features(names)), coef);
  out.report = evaluate_scores(scores, test.labels(), cfg.bootstrap);
  out.report.notes.push_back(fmt::format("lambda {:.6g}", path.lambdas[best]));
  return out;
}

BaselineResult rf_classifier(std::string name, const Dataset& train, const Dataset& test,
                             std::span<const std::string> variables, const BaselineConfig& cfg) {
  BaselineResult out;
  out.name = std::move(name);
  const auto forest = RandomForest::fit(train, cfg.rf, variables);
  out.selected = forest.feature_names();
  out.m = static_cast<int>(out.selected.size());
  const auto scores = forest.predict(test);
  out.report = evaluate_scores(scores, test.labels(), cfg.bootstrap);
  return out;
}

}  // namespace scorecard
