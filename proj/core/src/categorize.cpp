#include "scorecard/categorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "scorecard/error.hpp"

namespace scorecard {

namespace {

std::string format_cut(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

std::size_t VariableCuts::level_of(double value) const {
  if (source_kind == FeatureKind::kCategorical) {
    auto idx = static_cast<std::size_t>(value);
    if (value < 0 || idx >= levels.size())
      throw ValidationError(fmt::format("'{}': level index {} out of range", name, value));
    return idx;
  }
  return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), value) -
                                  cuts.begin());
}

const VariableCuts* CutoffTable::find(std::string_view name) const {
  for (const auto& v : variables)
    if (v.name == name) return &v;
  return nullptr;
}

std::vector<std::string> CutoffTable::names() const {
  std::vector<std::string> out;
  for (const auto& v : variables) out.push_back(v.name);
  return out;
}

void validate_quantile_probs(std::span<const double> probs) {
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0 && probs[i] < 1.0))
      throw ValidationError(fmt::format("quantile {} is outside (0, 1)", probs[i]));
    if (i && !(probs[i] > probs[i - 1]))
      throw ValidationError("quantiles must be strictly increasing");
  }
}

void validate_override(std::string_view name, const std::vector<double>& cuts) {
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!std::isfinite(cuts[i]))
      throw ValidationError(fmt::format("cut override for '{}' is not finite", name));
    if (i && !(cuts[i] > cuts[i - 1]))
      throw ValidationError(
          fmt::format("cut override for '{}' must be strictly increasing", name));
  }
}

std::vector<double> quantiles(std::vector<double> values, std::span<const double> probs) {
  if (values.empty()) throw ValidationError("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) {
    const double h = (n - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    out.push_back(values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]));
  }
  return out;
}

std::vector<double> quantile_cuts(const std::vector<double>& values,
                                  std::span<const double> probs) {
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (double c : quantiles(sorted, probs)) {
    // Keep a cut only if the interval it closes, [previous cut, c), holds data.
    const double prev = cuts.empty() ? -std::numeric_limits<double>::infinity() : cuts.back();
    if (!(c > prev)) continue;
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), prev);
    if (first != sorted.end() && *first < c) cuts.push_back(c);
  }
  return cuts;
}

std::vector<std::string> interval_labels(const std::vector<double>& cuts) {
  if (cuts.empty()) return {"all"};
  std::vector<std::string> labels;
  labels.push_back("<" + format_cut(cuts.front()));
  for (std::size_t k = 1; k < cuts.size(); ++k)
    labels.push_back(format_cut(cuts[k - 1]) + "-" + format_cut(cuts[k]));
  labels.push_back(">=" + format_cut(cuts.back()));
  return labels;
}

Categorized categorize(const Dataset& train, std::span<const std::string> variables,
                       std::span<const double> probs, const CutOverrides& overrides) {
  validate_quantile_probs(probs);
  if (train.empty()) throw ValidationError("categorize: empty training data");
  if (train.num_rows() < probs.size() + 1)
    throw ValidationError(fmt::format("categorize: need at least {} rows, got {}",
                                      probs.size() + 1, train.num_rows()));
  for (const auto& [name, cuts] : overrides) {
    if (std::find(variables.begin(), variables.end(), name) == variables.end())
      throw ValidationError(fmt::format("cut override for unselected variable '{}'", name));
    validate_override(name, cuts);
  }

  Categorized result;
  for (const auto& name : variables) {
    const std::size_t col = train.feature_index(name);
    const auto& spec = train.feature(col);
    VariableCuts vc;
    vc.name = name;
    vc.source_kind = spec.kind;
    auto override_it = overrides.find(name);
    if (spec.is_categorical()) {
      if (override_it != overrides.end())
        throw ValidationError(
            fmt::format("'{}' is categorical; cut overrides apply to continuous variables", name));
      vc.levels = spec.categories;
    } else {
      if (override_it != overrides.end()) {
        vc.cuts = override_it->second;
      } else {
        const auto values = train.column(col);
        vc.cuts = quantile_cuts(values, probs);
        if (vc.cuts.empty())
          result.warnings.push_back(
              fmt::format("'{}' has a single distinct value; kept as one category", name));
      }
      vc.levels = interval_labels(vc.cuts);
    }
    result.cutoffs.variables.push_back(std::move(vc));
  }
  result.data = apply_cutoffs(result.cutoffs, train);
  return result;
}

Dataset apply_cutoffs(const CutoffTable& cutoffs, const Dataset& data) {
  std::vector<std::size_t> columns;
  std::vector<FeatureSpec> features;
  for (const auto& vc : cutoffs.variables) {
    const std::size_t col = data.feature_index(vc.name);
    if (data.feature(col).kind != vc.source_kind)
      throw ValidationError(fmt::format("'{}' has a different kind than at fit time", vc.name));
    columns.push_back(col);
    features.push_back(FeatureSpec::categorical(vc.name, vc.levels));
  }
  std::vector<double> values;
  values.reserve(data.num_rows() * columns.size());
  for (std::size_t r = 0; r < data.num_rows(); ++r)
    for (std::size_t j = 0; j < columns.size(); ++j)
      values.push_back(static_cast<double>(
          cutoffs.variables[j].level_of(data.value(r, columns[j]))));
  return Dataset(std::move(features), std::move(values),
                 std::vector<std::uint8_t>(data.labels().begin(), data.labels().end()),
                 data.label_coding());
}

}  // namespace scorecard
