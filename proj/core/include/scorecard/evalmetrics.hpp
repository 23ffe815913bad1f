#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scorecard {

struct RocPoint {
  double threshold = 0.0;
  double sensitivity = 0.0;
  double fpr = 0.0;  // 1 - specificity
};

/// One point per distinct score, thresholds ascending. A row is predicted
/// positive when its score is >= the threshold.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.5;
};

/// AUC is the Mann-Whitney statistic P(s+ > s-) + P(s+ == s-) / 2.
RocCurve roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Threshold of the point closest to (fpr 0, sensitivity 1). Ties go to the
/// point with the higher specificity.
double optimal_threshold(const RocCurve& curve);

struct ConfusionMetrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double balanced_accuracy = 0.0;
  /// Empty when no row is predicted negative / positive.
  std::optional<double> npv;
  std::optional<double> ppv;
};

double balanced_accuracy(double sensitivity, double specificity);

ConfusionMetrics confusion_metrics(std::span<const double> scores,
                                   std::span<const std::uint8_t> labels, double threshold);

/// Nearest-rank percentile: the ceil(p * n)-th smallest value (1-based).
double percentile(std::vector<double> values, double p);

struct BootstrapOptions {
  int replicates = 1000;
  std::uint64_t seed = 0;
  double level = 0.95;

  void validate() const;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Metric vector computed on one (resampled) sample. An entry may be NaN when
/// the metric is undefined on that sample; such entries are left out of the
/// interval for that metric.
using MetricFunction =
    std::function<std::vector<double>(std::span<const double>, std::span<const std::uint8_t>)>;

struct BootstrapResult {
  std::vector<Interval> intervals;
  /// Replicate values per metric (NaN entries removed).
  std::vector<std::vector<double>> replicates;
  /// Resamples drawn again because they held a single class.
  int redraws = 0;
};

/// Paired resampling with replacement at the original size. Replicate b uses
/// its own stream derived from (seed, b), so results do not depend on
/// evaluation order. Throws DataError if single-class resamples outnumber
/// the accepted ones.
BootstrapResult bootstrap_ci(const MetricFunction& metric, std::span<const double> scores,
                             std::span<const std::uint8_t> labels,
                             const BootstrapOptions& options);

struct Estimate {
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
  bool defined = true;
};

struct MetricReport {
  double threshold = 0.0;
  Estimate auc, sensitivity, specificity, balanced_accuracy, npv, ppv;
  int n_bootstrap = 0;
  std::uint64_t seed = 0;
  int redraws = 0;
  bool degenerate = false;
  std::vector<std::string> notes;
};

/// Optimal threshold, full-sample metrics and percentile intervals. Each
/// replicate re-derives its own optimal threshold.
MetricReport evaluate_scores(std::span<const double> scores,
                             std::span<const std::uint8_t> labels,
                             const BootstrapOptions& options);

/// Column header matching `tsv_row`.
std::string tsv_header();
/// model, m, threshold, then "point (low-high)" for AUC, sensitivity,
/// specificity, balanced accuracy, NPV and PPV.
std::string tsv_row(std::string_view model, int m, const MetricReport& report);
std::string format_estimate(const Estimate& e);

}  // namespace scorecard
