#include "scorecard/logistic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "scorecard/error.hpp"

namespace scorecard {

namespace {

double log1p_exp(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Weighted cross product X' diag(w) X, exploiting row sparsity.
Eigen::MatrixXd weighted_gram(const SparseRowMatrix& x, const Eigen::VectorXd& w) {
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double wi = w(i);
    if (wi == 0.0) continue;
    for (SparseRowMatrix::InnerIterator a(x, i); a; ++a) {
      const double va = wi * a.value();
      for (SparseRowMatrix::InnerIterator b(x, i); b && b.col() <= a.col(); ++b)
        h(a.col(), b.col()) += va * b.value();
    }
  }
  return h.selfadjointView<Eigen::Lower>();
}

double objective(const SparseRowMatrix& x, std::span<const std::uint8_t> y,
                 std::span<const double> w, const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = x * beta;
  double value = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    value += w[static_cast<std::size_t>(i)] *
             (log1p_exp(eta(i)) - y[static_cast<std::size_t>(i)] * eta(i));
  if (ridge > 0) value += 0.5 * ridge * beta.tail(beta.size() - 1).squaredNorm();
  return value;  // negative penalized log-likelihood
}

bool rank_deficient(const SparseRowMatrix& x, std::span<const double> weights) {
  Eigen::VectorXd w(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) w(i) = weights[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd gram = weighted_gram(x, w);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  return !(top > 0.0) || ev.minCoeff() <= 1e-10 * top;
}

struct IrlsOutcome {
  Eigen::VectorXd beta;
  int iterations = 0;
  bool converged = false;
};

IrlsOutcome irls(const SparseRowMatrix& x, std::span<const std::uint8_t> y,
                 std::span<const double> w, double ridge, const LogisticOptions& opt,
                 const Eigen::VectorXd* start = nullptr) {
  const Eigen::Index p = x.cols();
  IrlsOutcome out;
  if (start) {
    out.beta = *start;
  } else {
    // Start from the weighted marginal log-odds.
    out.beta = Eigen::VectorXd::Zero(p);
    double wy = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      wy += w[i] * y[i];
      wsum += w[i];
    }
    if (wy > 0.0 && wy < wsum) out.beta(0) = std::log(wy / (wsum - wy));
  }

  Eigen::MatrixXd penalty = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 1; j < p; ++j) penalty(j, j) = ridge;

  double current = objective(x, y, w, out.beta, ridge);
  for (int it = 1; it <= opt.max_iter; ++it) {
    out.iterations = it;
    const Eigen::VectorXd eta = x * out.beta;
    Eigen::VectorXd curvature(eta.size()), resid(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu = sigmoid(eta(i));
      const double wi = w[static_cast<std::size_t>(i)];
      curvature(i) = wi * mu * (1.0 - mu);
      resid(i) = wi * (y[static_cast<std::size_t>(i)] - mu);
    }
    Eigen::VectorXd gradient = x.transpose() * resid;
    gradient.tail(p - 1) -= ridge * out.beta.tail(p - 1);
    const Eigen::MatrixXd hessian = weighted_gram(x, curvature) + penalty;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd step = ldlt.solve(gradient);
    if (!step.allFinite()) break;

    double scale = 1.0;
    Eigen::VectorXd next = out.beta + step;
    double value = objective(x, y, w, next, ridge);
    for (int halving = 0; halving < 30 && !(value <= current + 1e-12 * std::abs(current));
         ++halving) {
      scale *= 0.5;
      next = out.beta + scale * step;
      value = objective(x, y, w, next, ridge);
    }
    double change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j)
      change = std::max(change, std::abs(next(j) - out.beta(j)) /
                                    std::max(1.0, std::abs(next(j))));
    // A Newton decrement at round-off level means the objective is flat even
    // when an ill-conditioned Hessian keeps the coefficients jittering.
    const double decrement = gradient.dot(step);
    out.beta = next;
    current = value;
    if (change < opt.tol || decrement <= 1e-12 * std::abs(current)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

LogisticFit fit_logistic(const SparseRowMatrix& design, std::span<const std::uint8_t> labels,
                         std::span<const double> weights, const LogisticOptions& options) {
  if (design.rows() != static_cast<Eigen::Index>(labels.size()) ||
      labels.size() != weights.size())
    throw ValidationError("fit_logistic: design, labels and weights differ in length");
  if (design.cols() < 1) throw ValidationError("fit_logistic: design has no intercept");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ValidationError("fit_logistic: weights must be finite and non-negative");
  if (options.max_iter < 1 || !(options.tol > 0.0))
    throw ValidationError("fit_logistic: max_iter and tol must be positive");

  LogisticFit fit;
  double ridge = options.ridge;
  if (ridge == 0.0 && design.cols() > 1 && rank_deficient(design, weights)) {
    ridge = options.fallback_ridge;
    fit.warnings.push_back(fmt::format(
        "design matrix is rank deficient; ridge penalty {:g} applied", ridge));
  }

  // Penalties are per unit of mean weight so that rescaling every weight
  // leaves the fitted coefficients unchanged.
  double mean_weight = 0.0;
  for (double w : weights) mean_weight += w;
  mean_weight = weights.empty() ? 1.0 : mean_weight / static_cast<double>(weights.size());
  if (!(mean_weight > 0.0)) throw ValidationError("fit_logistic: every weight is zero");

  auto outcome = irls(design, labels, weights, ridge * mean_weight, options);
  const bool separated =
      outcome.beta.size() > 1 &&
      outcome.beta.tail(outcome.beta.size() - 1).cwiseAbs().maxCoeff() >
          options.separation_threshold;
  if (ridge == 0.0 && (separated || !outcome.converged)) {
    ridge = options.fallback_ridge;
    fit.warnings.push_back(fmt::format(
        "{}; refitting with ridge penalty {:g}",
        separated ? "coefficient magnitude above separation threshold"
                  : fmt::format("IRLS did not converge in {} iterations", outcome.iterations),
        ridge));
    // The unpenalized iterate is usually close to the penalized optimum, which
    // under separation lies far from the origin.
    const Eigen::VectorXd start = outcome.beta;
    outcome = irls(design, labels, weights, ridge * mean_weight, options,
                   start.allFinite() ? &start : nullptr);
  }
  if (!outcome.converged || !outcome.beta.allFinite())
    throw NumericalError(fmt::format("IRLS did not converge after {} iterations",
                                     outcome.iterations));
  if (outcome.beta.size() > 1 &&
      outcome.beta.tail(outcome.beta.size() - 1).cwiseAbs().maxCoeff() >
          options.separation_threshold)
    fit.warnings.push_back("possible separation: coefficient magnitude exceeds threshold");

  fit.coefficients = std::move(outcome.beta);
  fit.iterations = outcome.iterations;
  fit.converged = true;
  fit.ridge = ridge;
  return fit;
}

SparseRowMatrix build_design(const Dataset& data, DesignLayout* layout) {
  DesignLayout local;
  DesignLayout& lay = layout ? *layout : local;
  lay = DesignLayout{};
  for (const auto& f : data.features()) {
    lay.variables.push_back(f.name);
    lay.first_column.push_back(lay.num_columns);
    const int width = f.is_categorical() ? static_cast<int>(f.categories.size()) - 1 : 1;
    lay.width.push_back(width);
    lay.num_columns += width;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(data.num_rows() * (data.num_features() + 1));
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    const auto row = static_cast<int>(r);
    triplets.emplace_back(row, 0, 1.0);
    for (std::size_t j = 0; j < data.num_features(); ++j) {
      const double v = data.value(r, j);
      if (data.feature(j).is_categorical()) {
        const int level = static_cast<int>(v);
        if (level > 0) triplets.emplace_back(row, lay.first_column[j] + level - 1, 1.0);
      } else if (v != 0.0) {
        triplets.emplace_back(row, lay.first_column[j], v);
      }
    }
  }
  SparseRowMatrix x(static_cast<Eigen::Index>(data.num_rows()), lay.num_columns);
  x.setFromTriplets(triplets.begin(), triplets.end());
  return x;
}

std::vector<double> class_weights(const Dataset& data, double minority_weight) {
  std::vector<double> w(data.num_rows());
  for (std::size_t r = 0; r < data.num_rows(); ++r)
    w[r] = data.label(r) ? minority_weight : 1.0;
  return w;
}

CategoryModel fit_weighted_lr(const Dataset& categorized, double minority_weight,
                              const LogisticOptions& options) {
  if (!(minority_weight > 0.0) || !std::isfinite(minority_weight))
    throw ValidationError("fit_weighted_lr: weight must be positive and finite");
  for (const auto& f : categorized.features())
    if (!f.is_categorical())
      throw ValidationError(
          fmt::format("fit_weighted_lr: '{}' is not categorized", f.name));
  DesignLayout layout;
  const auto design = build_design(categorized, &layout);
  const auto weights = class_weights(categorized, minority_weight);
  CategoryModel model;
  model.fit = fit_logistic(design, categorized.labels(), weights, options);
  model.intercept = model.fit.coefficients(0);
  model.variables = layout.variables;
  for (std::size_t j = 0; j < layout.variables.size(); ++j) {
    std::vector<double> levels(static_cast<std::size_t>(layout.width[j]) + 1, 0.0);
    for (int k = 0; k < layout.width[j]; ++k)
      levels[static_cast<std::size_t>(k) + 1] =
          model.fit.coefficients(layout.first_column[j] + k);
    model.level_coefficients.push_back(std::move(levels));
  }
  return model;
}

std::vector<double> linear_predictor(const SparseRowMatrix& design,
                                     const Eigen::VectorXd& coefficients) {
  const Eigen::VectorXd eta = design * coefficients;
  return {eta.data(), eta.data() + eta.size()};
}

}  // namespace scorecard
