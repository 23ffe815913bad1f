#include "scorecard/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "scorecard/error.hpp"
#include "scorecard/random.hpp"

namespace scorecard {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size())
    throw ValidationError("scores and labels differ in length");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw ValidationError("scores must be finite");
    pos += labels[i] ? 1 : 0;
  }
  if (pos == 0 || pos == labels.size())
    throw ValidationError("both classes must be present");
}

bool single_class(std::span<const std::uint8_t> labels) {
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] != labels[0]) return false;
  return true;
}

}  // namespace

RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_inputs(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double total_pos = 0, total_neg = 0;
  for (auto y : labels) (y ? total_pos : total_neg) += 1;

  // Sweep ascending groups of tied scores. `neg_below` counts negatives with
  // strictly smaller scores, which every positive in the group outranks.
  RocCurve curve;
  double pos_at_or_above = total_pos, neg_at_or_above = total_neg;
  double neg_below = 0, wins = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    double pos = 0, neg = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? pos : neg) += 1;
      ++j;
    }
    curve.points.push_back(
        {scores[order[i]], pos_at_or_above / total_pos, neg_at_or_above / total_neg});
    wins += pos * neg_below + 0.5 * pos * neg;
    neg_below += neg;
    pos_at_or_above -= pos;
    neg_at_or_above -= neg;
    i = j;
  }
  curve.auc = wins / (total_pos * total_neg);
  return curve;
}

double optimal_threshold(const RocCurve& curve) {
  if (curve.points.empty()) throw ValidationError("optimal_threshold: empty curve");
  const RocPoint* best = nullptr;
  double best_d2 = 0.0;
  for (const auto& pt : curve.points) {
    const double d2 = (1.0 - pt.sensitivity) * (1.0 - pt.sensitivity) + pt.fpr * pt.fpr;
    if (!best || d2 < best_d2 - 1e-12 ||
        (std::abs(d2 - best_d2) <= 1e-12 && pt.fpr < best->fpr)) {
      best = &pt;
      best_d2 = d2;
    }
  }
  return best->threshold;
}

double balanced_accuracy(double sensitivity, double specificity) {
  return (sensitivity + specificity) / 2.0;
}

ConfusionMetrics confusion_metrics(std::span<const double> scores,
                                   std::span<const std::uint8_t> labels, double threshold) {
  check_inputs(scores, labels);
  ConfusionMetrics m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i])
      ++(predicted ? m.tp : m.fn);
    else
      ++(predicted ? m.fp : m.tn);
  }
  const auto d = [](std::size_t v) { return static_cast<double>(v); };
  m.sensitivity = d(m.tp) / d(m.tp + m.fn);
  m.specificity = d(m.tn) / d(m.tn + m.fp);
  m.balanced_accuracy = balanced_accuracy(m.sensitivity, m.specificity);
  if (m.tn + m.fn > 0) m.npv = d(m.tn) / d(m.tn + m.fn);
  if (m.tp + m.fp > 0) m.ppv = d(m.tp) / d(m.tp + m.fp);
  return m;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("percentile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("percentile outside [0, 1]");
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

void BootstrapOptions::validate() const {
  if (replicates < 2) throw ValidationError("bootstrap needs at least 2 replicates");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("bootstrap level must be in (0, 1)");
}

BootstrapResult bootstrap_ci(const MetricFunction& metric, std::span<const double> scores,
                             std::span<const std::uint8_t> labels,
                             const BootstrapOptions& options) {
  options.validate();
  check_inputs(scores, labels);
  const std::size_t n = scores.size();
  BootstrapResult result;
  std::vector<double> s(n);
  std::vector<std::uint8_t> y(n);
  for (int b = 0; b < options.replicates; ++b) {
    Rng rng(derive_seed(options.seed, "bootstrap", static_cast<std::uint64_t>(b)));
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = rng.uniform_index(n);
        s[i] = scores[k];
        y[i] = labels[k];
      }
      if (!single_class(y)) break;
      if (++result.redraws > options.replicates)
        throw DataError(fmt::format(
            "more than half of the bootstrap resamples hold a single class ({} redraws); "
            "the minority class is too rare for {} rows, use a larger evaluation set",
            result.redraws, n));
    }
    const auto values = metric(s, y);
    if (result.replicates.empty()) result.replicates.resize(values.size());
    if (values.size() != result.replicates.size())
      throw ValidationError("bootstrap metric returned a varying number of values");
    for (std::size_t k = 0; k < values.size(); ++k)
      if (!std::isnan(values[k])) result.replicates[k].push_back(values[k]);
  }
  const double tail = (1.0 - options.level) / 2.0;
  for (const auto& column : result.replicates) {
    if (column.empty()) {
      result.intervals.push_back({kNaN, kNaN});
      continue;
    }
    result.intervals.push_back({percentile(column, tail), percentile(column, 1.0 - tail)});
  }
  return result;
}

namespace {

std::vector<double> full_metrics(std::span<const double> scores,
                                 std::span<const std::uint8_t> labels) {
  const auto curve = roc_auc(scores, labels);
  const auto m = confusion_metrics(scores, labels, optimal_threshold(curve));
  return {curve.auc,         m.sensitivity,         m.specificity,
          m.balanced_accuracy, m.npv.value_or(kNaN), m.ppv.value_or(kNaN)};
}

}  // namespace

MetricReport evaluate_scores(std::span<const double> scores,
                             std::span<const std::uint8_t> labels,
                             const BootstrapOptions& options) {
  options.validate();
  const auto curve = roc_auc(scores, labels);
  MetricReport report;
  report.threshold = optimal_threshold(curve);
  const auto m = confusion_metrics(scores, labels, report.threshold);
  report.degenerate = curve.points.size() == 1;
  if (report.degenerate) report.notes.push_back("all scores are identical");

  const auto boot = bootstrap_ci(full_metrics, scores, labels, options);
  report.n_bootstrap = options.replicates;
  report.seed = options.seed;
  report.redraws = boot.redraws;
  if (boot.redraws > 0)
    report.notes.push_back(fmt::format("{} single-class resamples redrawn", boot.redraws));

  const char* names[] = {"AUC", "sensitivity", "specificity", "balanced accuracy", "NPV", "PPV"};
  Estimate* slots[] = {&report.auc, &report.sensitivity, &report.specificity,
                       &report.balanced_accuracy, &report.npv, &report.ppv};
  const double points[] = {curve.auc, m.sensitivity, m.specificity, m.balanced_accuracy,
                           m.npv.value_or(kNaN), m.ppv.value_or(kNaN)};
  for (std::size_t k = 0; k < 6; ++k) {
    Estimate& e = *slots[k];
    e.point = points[k];
    e.low = boot.intervals[k].low;
    e.high = boot.intervals[k].high;
    e.defined = !std::isnan(e.point);
    if (!e.defined) {
      report.notes.push_back(fmt::format("{} undefined at the chosen threshold", names[k]));
      continue;
    }
    if (boot.replicates[k].size() < static_cast<std::size_t>(options.replicates))
      report.notes.push_back(fmt::format("{} undefined in {} resamples", names[k],
                                         options.replicates - boot.replicates[k].size()));
    if (!std::isnan(e.low) && (e.point < e.low || e.point > e.high))
      report.notes.push_back(fmt::format("{} point estimate lies outside its interval", names[k]));
  }
  return report;
}

std::string format_estimate(const Estimate& e) {
  if (!e.defined) return "NA";
  if (std::isnan(e.low)) return fmt::format("{:.3f} (NA)", e.point);
  return fmt::format("{:.3f} ({:.3f}-{:.3f})", e.point, e.low, e.high);
}

std::string tsv_header() {
  return "model\tm\tthreshold\tauc\tsensitivity\tspecificity\tbalanced_accuracy\tnpv\tppv";
}

std::string tsv_row(std::string_view model, int m, const MetricReport& r) {
  return fmt::format("{}\t{}\t{:.4g}\t{}\t{}\t{}\t{}\t{}\t{}", model, m, r.threshold,
                     format_estimate(r.auc), format_estimate(r.sensitivity),
                     format_estimate(r.specificity), format_estimate(r.balanced_accuracy),
                     format_estimate(r.npv), format_estimate(r.ppv));
}

}  // namespace scorecard
