#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "scorecard/dataset.hpp"

namespace scorecard {

/// Categories of one variable. Continuous variables map x to the half-open
/// interval [cuts[k-1], cuts[k]) with implicit -inf / +inf ends; categorical
/// variables keep their levels and have no cuts.
struct VariableCuts {
  std::string name;
  FeatureKind source_kind = FeatureKind::kContinuous;
  std::vector<double> cuts;
  std::vector<std::string> levels;

  std::size_t num_levels() const { return levels.size(); }
  /// Category index of a source value (level index for categorical sources).
  std::size_t level_of(double value) const;
  bool operator==(const VariableCuts&) const = default;
};

struct CutoffTable {
  std::vector<VariableCuts> variables;

  const VariableCuts* find(std::string_view name) const;
  std::vector<std::string> names() const;
  bool operator==(const CutoffTable&) const = default;
};

using CutOverrides = std::map<std::string, std::vector<double>, std::less<>>;

/// Default quantile probabilities for continuous variables.
inline const std::vector<double> kDefaultQuantiles{0.05, 0.2, 0.8, 0.95};

/// Sample quantiles (linear interpolation between order statistics, the
/// "type 7" definition) at each probability.
std::vector<double> quantiles(std::vector<double> values, std::span<const double> probs);

/// Quantile cut points, dropping any cut that would leave an interval with
/// no training value (duplicates and cuts at or below the minimum included).
std::vector<double> quantile_cuts(const std::vector<double>& values,
                                  std::span<const double> probs);

/// "<50", "50-65", ">=75" style labels, one per interval.
std::vector<std::string> interval_labels(const std::vector<double>& cuts);

struct Categorized {
  CutoffTable cutoffs;
  /// Only the requested variables, each categorical; labels preserved.
  Dataset data;
  std::vector<std::string> warnings;
};

/// Builds cut points for `variables` from `train` (quantiles unless an
/// override is given for that variable) and transforms `train`.
/// Overrides must be finite and strictly increasing.
Categorized categorize(const Dataset& train, std::span<const std::string> variables,
                       std::span<const double> probs, const CutOverrides& overrides = {});

/// Applies existing cut points to any dataset holding the same variables.
Dataset apply_cutoffs(const CutoffTable& cutoffs, const Dataset& data);

void validate_quantile_probs(std::span<const double> probs);
void validate_override(std::string_view name, const std::vector<double>& cuts);

}  // namespace scorecard
