#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "scorecard/categorize.hpp"
#include "scorecard/dataset.hpp"
#include "scorecard/forest.hpp"
#include "scorecard/logistic.hpp"

namespace scorecard {

struct VariablePoints {
  std::string name;
  std::vector<std::string> levels;
  std::vector<int> points;

  int max_points() const;
  bool operator==(const VariablePoints&) const = default;
};

/// Integer points per variable and category; each variable's lowest-risk
/// category scores 0.
struct ScoreTable {
  std::vector<VariablePoints> variables;
  int max_total = 100;

  const VariablePoints* find(std::string_view name) const;
  /// Sum of the per-variable maxima.
  int max_score() const;
  bool operator==(const ScoreTable&) const = default;
};

struct ScoreAssignment {
  ScoreTable table;
  std::vector<std::string> warnings;
};

/// Shifts each variable's category coefficients so the smallest is 0, scales
/// all of them by max_total / sum(per-variable max) and rounds half away from
/// zero. If rounding pushes the sum of maxima above max_total, the top
/// categories with the largest upward rounding lose a point until it fits.
ScoreAssignment assign_scores(const CategoryModel& model,
                              const std::vector<std::vector<std::string>>& levels,
                              int max_total = 100);

struct Scorecard {
  CutoffTable cutoffs;
  ScoreTable table;
  bool operator==(const Scorecard&) const = default;
};

/// Total points for a record of raw values keyed by variable name. For
/// categorical variables the value is the level index.
int apply_score(const ScoreTable& table, const CutoffTable& cutoffs,
                const std::map<std::string, double, std::less<>>& record);

/// Same, with values as text: numbers for continuous variables, level names
/// for categorical ones.
int apply_score_text(const ScoreTable& table, const CutoffTable& cutoffs,
                     const std::map<std::string, std::string, std::less<>>& record);

/// Scores every row of `data`, which must hold the scorecard's variables.
std::vector<int> score_rows(const Scorecard& card, const Dataset& data);
std::vector<double> score_rows_real(const Scorecard& card, const Dataset& data);

struct ScoreConfig {
  std::vector<double> quantiles = kDefaultQuantiles;
  int max_total = 100;
  /// Weight of minority rows in the logistic fit; majority rows weigh 1.
  double sample_weight = 1.0;
  LogisticOptions lr;

  void validate() const;
};

struct ScoreModel {
  Scorecard card;
  CategoryModel model;
  std::vector<std::string> warnings;
};

/// Categorize, fit the weighted logistic model and assign points.
ScoreModel build_scorecard(const Dataset& train, std::span<const std::string> variables,
                           const ScoreConfig& cfg, const CutOverrides& overrides = {});

/// Rebuild with explicit cut points for some variables; the others keep
/// their quantile cuts.
ScoreModel fine_tune(const Dataset& train, std::span<const std::string> variables,
                     const ScoreConfig& cfg, const CutOverrides& overrides);

struct ParsimonyPoint {
  int m = 0;
  double auc = 0.0;
  bool operator==(const ParsimonyPoint&) const = default;
};

/// Validation AUC of the table built on the top-m ranked variables, for
/// m = 1..max_m.
std::vector<ParsimonyPoint> parsimony_curve(const std::vector<RankedVariable>& ranked,
                                            const Dataset& train, const Dataset& validation,
                                            int max_m, const ScoreConfig& cfg);

/// Validation AUC of a scorecard.
double scorecard_auc(const Scorecard& card, const Dataset& data);

/// Variable / interval / point table in markdown.
std::string render_markdown(const ScoreTable& table);

}  // namespace scorecard
