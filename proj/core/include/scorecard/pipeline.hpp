#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scorecard/baselines.hpp"
#include "scorecard/categorize.hpp"
#include "scorecard/dataset.hpp"
#include "scorecard/evalmetrics.hpp"
#include "scorecard/forest.hpp"
#include "scorecard/rebalance.hpp"
#include "scorecard/scoring.hpp"
#include "scorecard/tabgan.hpp"

namespace scorecard {

/// A rebalancing method, with its training length for GAN methods.
struct MethodSpec {
  RebalanceMethod method = RebalanceMethod::kDownsample;
  int gan_epochs = 0;  // 0 for non-GAN methods

  /// "DS", "GAN(e=500)", "GAN+DS(e=5000)", ...
  std::string label() const;
  bool operator==(const MethodSpec&) const = default;
};

struct PipelineConfig {
  std::vector<RebalanceMethod> methods{kAllMethods.begin(), kAllMethods.end()};
  std::vector<double> rate_grid{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  /// Training lengths for GAN methods (see expand_methods).
  std::vector<int> gan_epochs{500, 5000};
  /// Adds the pass-through cell P' = P to the Block A grid.
  bool include_control = true;
  /// When false, Block B is skipped and w = 1.
  bool weight_search = true;
  int weight_step = 1;
  /// Parsimony curve length; 0 uses every variable.
  int max_m = 0;
  RebalanceOptions rebalance;
  RfConfig rf;
  ScoreConfig score;
  BootstrapOptions bootstrap;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Forest settings used for every ranking in a run; the seed is derived
/// from the run seed.
RfConfig pipeline_rf(const PipelineConfig& cfg);

/// Block A / sub-model method list: GAN is expanded once per epoch count,
/// GAN+DS only at the largest.
std::vector<MethodSpec> expand_methods(const PipelineConfig& cfg);

/// round(sqrt(p)), half away from zero, at least 1.
int intermediate_m(std::size_t n_features);

/// ceil(N'_n / N'_p).
int max_weight(std::size_t n_pos, std::size_t n_neg);
/// 1, 1 + s, 1 + 2s, ... up to max_weight.
std::vector<double> weight_grid(std::size_t n_pos, std::size_t n_neg, int step);

struct BlockACell {
  /// Empty method marks the pass-through control cell.
  std::optional<MethodSpec> method;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::optional<RebalancePlan> plan;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::string dataset_hash;
  /// NaN when the cell failed; `error` then says why.
  double auc = 0.0;
  std::string error;

  std::string label() const;
};

/// Produces the generator for a GAN method; results are cached per epochs.
class GeneratorCache {
 public:
  GeneratorCache(const Dataset& train, const GanConfig& base, std::uint64_t seed);
  const Generator& get(int epochs);
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  const Dataset* train_;
  GanConfig base_;
  std::uint64_t seed_;
  std::map<int, Generator> cache_;
  std::vector<std::string> warnings_;
};

/// Rebuilds the processed dataset of a cell (pass-through for the control).
Dataset materialize_cell(const Dataset& train, const BlockACell& cell,
                         const PipelineConfig& cfg, GeneratorCache& generators);

struct BlockAResult {
  std::vector<BlockACell> grid;
  std::size_t winner = 0;
  Dataset data;
  int m = 0;
  std::vector<std::string> warnings;
};

/// Every (method, P') cell, plus the control cell first when enabled:
/// rebalance, rank, build an m = round(sqrt(p)) variable table and score the
/// validation data. The best AUC wins; ties go to the smaller P', then to the
/// earlier method.
BlockAResult block_a_search(const Dataset& train, const Dataset& validation,
                            const std::vector<MethodSpec>& methods, const PipelineConfig& cfg,
                            GeneratorCache& generators);

struct WeightCell {
  double weight = 1.0;
  double auc = 0.0;
  bool operator==(const WeightCell&) const = default;
};

struct BlockBResult {
  std::vector<WeightCell> grid;
  double weight = 1.0;
};

/// Weighted tables on `variables` of the processed data for each grid
/// weight; the best validation AUC wins, ties going to the smaller weight.
BlockBResult block_b_search(const Dataset& processed, const Dataset& validation,
                            std::span<const std::string> variables, const PipelineConfig& cfg);

struct PipelineRecord {
  std::string version;
  std::string config_hash;
  PipelineConfig config;
  std::uint64_t split_seed = 0;
  std::string train_hash;
  std::string validation_hash;
  std::string test_hash;

  std::vector<MethodSpec> methods;
  int intermediate_m = 0;
  std::vector<BlockACell> block_a;
  std::size_t block_a_winner = 0;
  std::string processed_hash;
  std::vector<WeightCell> block_b;
  double weight = 1.0;
  std::vector<RankedVariable> ranking;
  std::vector<ParsimonyPoint> parsimony;
  std::vector<std::string> warnings;

  bool finalized = false;
  int m = 0;
  CutOverrides overrides;
  Scorecard scorecard;

  std::optional<MetricReport> test_report;
};

/// Blocks A, B and the parsimony curve. The test set is only fingerprinted.
PipelineRecord derive(const Dataset& train, const Dataset& validation,
                      const std::string& test_hash, std::uint64_t split_seed,
                      const PipelineConfig& cfg, const std::vector<MethodSpec>* methods = nullptr);
PipelineRecord derive(const SplitBundle& bundle, const PipelineConfig& cfg);

/// Builds the final table from the top-m ranked variables of the regenerated
/// winning dataset, with optional cut overrides.
void finalize(PipelineRecord& record, const Dataset& train, int m,
              const CutOverrides& overrides = {});

/// Scores the test set once. Throws ValidationError if the record is not
/// finalized, the test data differ from the split, or the record was already
/// evaluated.
MetricReport evaluate_final(PipelineRecord& record, const Dataset& test);

/// Smallest m whose validation AUC is within `tolerance` of the best.
int choose_m(const std::vector<ParsimonyPoint>& curve, double tolerance = 0.01);

struct BenchRow {
  std::string model;
  int m = 0;
  MetricReport report;
  double validation_auc = 0.0;  // NaN for baselines
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<PipelineRecord> records;  // one per score sub-model
  std::vector<std::string> warnings;
};

/// Original AutoScore control, the four baselines and one sub-model per
/// method spec (SMOTE, US, DS, US+DS, SMOTE+DS, GAN, GAN+DS), all scored on
/// the same test set.
BenchResult run_bench(const SplitBundle& bundle, const PipelineConfig& cfg);

/// Library version string.
std::string version();

}  // namespace scorecard
