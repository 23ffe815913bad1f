#include "scorecard/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "scorecard/csv.hpp"
#include "scorecard/error.hpp"
#include "scorecard/evalmetrics.hpp"

namespace scorecard {

int VariablePoints::max_points() const {
  return points.empty() ? 0 : *std::max_element(points.begin(), points.end());
}

const VariablePoints* ScoreTable::find(std::string_view name) const {
  for (const auto& v : variables)
    if (v.name == name) return &v;
  return nullptr;
}

int ScoreTable::max_score() const {
  int total = 0;
  for (const auto& v : variables) total += v.max_points();
  return total;
}

ScoreAssignment assign_scores(const CategoryModel& model,
                              const std::vector<std::vector<std::string>>& levels,
                              int max_total) {
  if (max_total < 1) throw ValidationError("max_total must be at least 1");
  if (levels.size() != model.level_coefficients.size())
    throw ValidationError("assign_scores: level names do not match the model");
  ScoreAssignment out;
  out.table.max_total = max_total;

  std::vector<std::vector<double>> shifted;
  double sum_max = 0.0;
  for (std::size_t j = 0; j < model.level_coefficients.size(); ++j) {
    const auto& c = model.level_coefficients[j];
    if (c.size() != levels[j].size())
      throw ValidationError(
          fmt::format("assign_scores: '{}' has mismatched levels", model.variables[j]));
    for (double v : c)
      if (!std::isfinite(v)) throw NumericalError("assign_scores: non-finite coefficient");
    const double lo = *std::min_element(c.begin(), c.end());
    std::vector<double> s(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) s[k] = c[k] - lo;
    sum_max += *std::max_element(s.begin(), s.end());
    shifted.push_back(std::move(s));
  }

  const double scale = sum_max > 0.0 ? max_total / sum_max : 0.0;
  if (sum_max == 0.0)
    out.warnings.push_back("all category coefficients are equal; every point is 0");

  std::vector<double> raw_max(shifted.size(), 0.0);
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    VariablePoints vp;
    vp.name = model.variables[j];
    vp.levels = levels[j];
    for (double s : shifted[j]) {
      vp.points.push_back(static_cast<int>(round_half_away(s * scale)));
      raw_max[j] = std::max(raw_max[j], s * scale);
    }
    out.table.variables.push_back(std::move(vp));
  }

  int excess = out.table.max_score() - max_total;
  while (excess > 0) {
    std::size_t pick = 0;
    double largest = -1e300;
    for (std::size_t j = 0; j < shifted.size(); ++j) {
      const int top = out.table.variables[j].max_points();
      const double up = top - raw_max[j];
      if (top > 0 && up > largest) {
        largest = up;
        pick = j;
      }
    }
    auto& vp = out.table.variables[pick];
    const int top = vp.max_points();
    for (auto& p : vp.points)
      if (p == top) --p;
    --excess;
  }
  return out;
}

namespace {

int points_for(const VariablePoints& vp, std::size_t level) {
  if (level >= vp.points.size())
    throw ValidationError(fmt::format("'{}': category {} outside the table", vp.name, level));
  return vp.points[level];
}

const VariableCuts& cuts_for(const CutoffTable& cutoffs, const VariablePoints& vp) {
  const auto* vc = cutoffs.find(vp.name);
  if (!vc) throw ValidationError(fmt::format("no cut points for '{}'", vp.name));
  if (vc->levels.size() != vp.levels.size())
    throw ValidationError(fmt::format("'{}': cut points and table disagree", vp.name));
  return *vc;
}

}  // namespace

int apply_score(const ScoreTable& table, const CutoffTable& cutoffs,
                const std::map<std::string, double, std::less<>>& record) {
  int total = 0;
  for (const auto& vp : table.variables) {
    const auto it = record.find(vp.name);
    if (it == record.end())
      throw ValidationError(fmt::format("record is missing variable '{}'", vp.name));
    if (std::isnan(it->second))
      throw ValidationError(fmt::format("record has no value for '{}'", vp.name));
    total += points_for(vp, cuts_for(cutoffs, vp).level_of(it->second));
  }
  return total;
}

int apply_score_text(const ScoreTable& table, const CutoffTable& cutoffs,
                     const std::map<std::string, std::string, std::less<>>& record) {
  std::map<std::string, double, std::less<>> numeric;
  for (const auto& vp : table.variables) {
    const auto it = record.find(vp.name);
    if (it == record.end())
      throw ValidationError(fmt::format("record is missing variable '{}'", vp.name));
    const auto& vc = cuts_for(cutoffs, vp);
    if (vc.source_kind == FeatureKind::kCategorical) {
      const auto pos = std::find(vc.levels.begin(), vc.levels.end(), it->second);
      if (pos == vc.levels.end())
        throw ValidationError(
            fmt::format("'{}': unknown category '{}'", vp.name, it->second));
      numeric[vp.name] = static_cast<double>(pos - vc.levels.begin());
    } else {
      const auto v = parse_double(it->second);
      if (!v)
        throw ValidationError(fmt::format("'{}': '{}' is not a number", vp.name, it->second));
      numeric[vp.name] = *v;
    }
  }
  return apply_score(table, cutoffs, numeric);
}

std::vector<int> score_rows(const Scorecard& card, const Dataset& data) {
  std::vector<std::size_t> cols;
  std::vector<const VariableCuts*> cuts;
  for (const auto& vp : card.table.variables) {
    cols.push_back(data.feature_index(vp.name));
    cuts.push_back(&cuts_for(card.cutoffs, vp));
  }
  std::vector<int> scores(data.num_rows(), 0);
  for (std::size_t r = 0; r < data.num_rows(); ++r)
    for (std::size_t j = 0; j < cols.size(); ++j)
      scores[r] += points_for(card.table.variables[j], cuts[j]->level_of(data.value(r, cols[j])));
  return scores;
}

std::vector<double> score_rows_real(const Scorecard& card, const Dataset& data) {
  const auto s = score_rows(card, data);
  return {s.begin(), s.end()};
}

void ScoreConfig::validate() const {
  validate_quantile_probs(quantiles);
  if (max_total < 1) throw ValidationError("max_total must be at least 1");
  if (!(sample_weight >= 1.0) || !std::isfinite(sample_weight))
    throw ValidationError("sample weight must be a finite value >= 1");
}

ScoreModel build_scorecard(const Dataset& train, std::span<const std::string> variables,
                           const ScoreConfig& cfg, const CutOverrides& overrides) {
  cfg.validate();
  if (variables.empty()) throw ValidationError("a scorecard needs at least one variable");
  auto cat = categorize(train, variables, cfg.quantiles, overrides);
  ScoreModel out;
  out.warnings = std::move(cat.warnings);
  out.model = fit_weighted_lr(cat.data, cfg.sample_weight, cfg.lr);
  out.warnings.insert(out.warnings.end(), out.model.fit.warnings.begin(),
                      out.model.fit.warnings.end());
  std::vector<std::vector<std::string>> levels;
  for (const auto& vc : cat.cutoffs.variables) levels.push_back(vc.levels);
  auto assigned = assign_scores(out.model, levels, cfg.max_total);
  out.warnings.insert(out.warnings.end(), assigned.warnings.begin(), assigned.warnings.end());
  out.card.cutoffs = std::move(cat.cutoffs);
  out.card.table = std::move(assigned.table);
  return out;
}

ScoreModel fine_tune(const Dataset& train, std::span<const std::string> variables,
                     const ScoreConfig& cfg, const CutOverrides& overrides) {
  return build_scorecard(train, variables, cfg, overrides);
}

double scorecard_auc(const Scorecard& card, const Dataset& data) {
  const auto scores = score_rows_real(card, data);
  return roc_auc(scores, data.labels()).auc;
}

std::vector<ParsimonyPoint> parsimony_curve(const std::vector<RankedVariable>& ranked,
                                            const Dataset& train, const Dataset& validation,
                                            int max_m, const ScoreConfig& cfg) {
  if (max_m < 1 || static_cast<std::size_t>(max_m) > ranked.size())
    throw ValidationError(
        fmt::format("max_m must be in [1, {}], got {}", ranked.size(), max_m));
  std::vector<ParsimonyPoint> curve;
  for (int m = 1; m <= max_m; ++m) {
    const auto vars = top_variables(ranked, static_cast<std::size_t>(m));
    const auto model = build_scorecard(train, vars, cfg);
    curve.push_back({m, scorecard_auc(model.card, validation)});
  }
  return curve;
}

std::string render_markdown(const ScoreTable& table) {
  std::string out = "| Variable | Interval | Point |\n|---|---|---|\n";
  for (const auto& vp : table.variables) {
    out += fmt::format("| {} | | |\n", vp.name);
    for (std::size_t k = 0; k < vp.levels.size(); ++k) {
      std::string label = vp.levels[k];
      if (label.rfind(">=", 0) == 0) label = "≥" + label.substr(2);
      out += fmt::format("| | {} | {} |\n", label, vp.points[k]);
    }
  }
  return out;
}

}  // namespace scorecard
