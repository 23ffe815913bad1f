#include "scorecard/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "scorecard/error.hpp"
#include "scorecard/random.hpp"
#include "scorecard/serialize.hpp"

namespace scorecard {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTieTolerance = 1e-12;

std::uint64_t cell_seed(const PipelineConfig& cfg, const MethodSpec& spec, double rate) {
  const auto rate_key = static_cast<std::uint64_t>(round_half_away(rate * 1e9));
  return derive_seed(derive_seed(cfg.seed, spec.label()), "rate", rate_key);
}

std::size_t method_rank(const std::optional<MethodSpec>& spec,
                        const std::vector<MethodSpec>& methods) {
  if (!spec) return 0;
  const auto it = std::find(methods.begin(), methods.end(), *spec);
  return 1 + static_cast<std::size_t>(it - methods.begin());
}

}  // namespace

std::string version() { return SCORECARD_VERSION; }

RfConfig pipeline_rf(const PipelineConfig& cfg) {
  RfConfig rf = cfg.rf;
  rf.seed = derive_seed(cfg.seed, "rf");
  return rf;
}

std::string MethodSpec::label() const {
  const auto name = std::string(method_name(method));
  return uses_gan(method) ? fmt::format("{}(e={})", name, gan_epochs) : name;
}

std::string BlockACell::label() const { return method ? method->label() : "NONE"; }

void PipelineConfig::validate() const {
  for (double r : rate_grid)
    if (!(r > 0.0 && r <= 0.5))
      throw ValidationError(fmt::format("target rate {} is outside (0, 0.5]", r));
  for (std::size_t i = 1; i < rate_grid.size(); ++i)
    if (!(rate_grid[i] > rate_grid[i - 1]))
      throw ValidationError("target rates must be strictly increasing");
  if (!methods.empty() && rate_grid.empty())
    throw ValidationError("rate grid is empty");
  if (methods.empty() && !include_control)
    throw ValidationError("Block A grid is empty: no methods and no control cell");
  const bool any_gan = std::any_of(methods.begin(), methods.end(), uses_gan);
  if (any_gan && gan_epochs.empty()) throw ValidationError("GAN methods need an epochs value");
  for (int e : gan_epochs)
    if (e < 1) throw ValidationError("GAN epochs must be at least 1");
  if (weight_step < 1) throw ValidationError("weight step must be a positive integer");
  if (max_m < 0) throw ValidationError("max_m must be non-negative");
  if (rebalance.smote.k_neighbors < 1) throw ValidationError("SMOTE k must be at least 1");
  rebalance.gan.validate();
  if (rf.n_trees < 1) throw ValidationError("random forest needs at least one tree");
  if (rf.min_leaf < 1) throw ValidationError("min_leaf must be at least 1");
  if (rf.mtry < 0) throw ValidationError("mtry must be non-negative");
  score.validate();
  bootstrap.validate();
}

std::vector<MethodSpec> expand_methods(const PipelineConfig& cfg) {
  std::vector<MethodSpec> out;
  for (auto m : cfg.methods) {
    if (m == RebalanceMethod::kGanDownsample) {
      out.push_back({m, *std::max_element(cfg.gan_epochs.begin(), cfg.gan_epochs.end())});
    } else if (uses_gan(m)) {
      for (int e : cfg.gan_epochs) out.push_back({m, e});
    } else {
      out.push_back({m, 0});
    }
  }
  return out;
}

int intermediate_m(std::size_t n_features) {
  return std::max(1, static_cast<int>(round_half_away(std::sqrt(static_cast<double>(n_features)))));
}

int max_weight(std::size_t n_pos, std::size_t n_neg) {
  if (n_pos == 0) throw ValidationError("no minority rows");
  return std::max<int>(1, static_cast<int>((n_neg + n_pos - 1) / n_pos));
}

std::vector<double> weight_grid(std::size_t n_pos, std::size_t n_neg, int step) {
  if (step < 1) throw ValidationError("weight step must be a positive integer");
  std::vector<double> grid;
  for (int w = 1; w <= max_weight(n_pos, n_neg); w += step) grid.push_back(w);
  return grid;
}

GeneratorCache::GeneratorCache(const Dataset& train, const GanConfig& base, std::uint64_t seed)
    : train_(&train), base_(base), seed_(seed) {}

const Generator& GeneratorCache::get(int epochs) {
  auto it = cache_.find(epochs);
  if (it != cache_.end()) return it->second;
  GanConfig cfg = base_;
  cfg.epochs = epochs;
  cfg.seed = derive_seed(seed_, "gan", static_cast<std::uint64_t>(epochs));
  auto result = train_gan(train_->subset(train_->positive_rows()), cfg);
  for (auto& w : result.warnings)
    warnings_.push_back(fmt::format("GAN(e={}): {}", epochs, w));
  return cache_.emplace(epochs, std::move(result.generator)).first->second;
}

Dataset materialize_cell(const Dataset& train, const BlockACell& cell,
                         const PipelineConfig& cfg, GeneratorCache& generators) {
  if (!cell.method) return train;
  if (!cell.plan) throw ValidationError("grid cell has no rebalancing plan");
  const Generator* gen =
      uses_gan(cell.method->method) ? &generators.get(cell.method->gan_epochs) : nullptr;
  return rebalance(train, *cell.plan, cfg.rebalance, cell.seed, gen);
}

BlockAResult block_a_search(const Dataset& train, const Dataset& validation,
                            const std::vector<MethodSpec>& methods, const PipelineConfig& cfg,
                            GeneratorCache& generators) {
  BlockAResult result;
  result.m = intermediate_m(train.num_features());
  const RfConfig rf = pipeline_rf(cfg);
  ScoreConfig score = cfg.score;
  score.sample_weight = 1.0;

  std::vector<BlockACell> cells;
  if (cfg.include_control) {
    BlockACell control;
    control.rate = train.minority_rate();
    cells.push_back(control);
  }
  for (const auto& spec : methods)
    for (double rate : cfg.rate_grid) {
      BlockACell cell;
      cell.method = spec;
      cell.rate = rate;
      cell.seed = cell_seed(cfg, spec, rate);
      cells.push_back(cell);
    }
  if (cells.empty()) throw ValidationError("Block A grid is empty");

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& cell = cells[i];
    try {
      if (cell.method) cell.plan = make_plan(cell.method->method, train, cell.rate);
      const Dataset data = materialize_cell(train, cell, cfg, generators);
      cell.n_pos = data.num_positive();
      cell.n_neg = data.num_negative();
      cell.dataset_hash = data.fingerprint();
      const auto ranked = rank_variables(data, rf);
      const auto vars = top_variables(ranked, static_cast<std::size_t>(result.m));
      const auto model = build_scorecard(data, vars, score);
      cell.auc = scorecard_auc(model.card, validation);
    } catch (const Error& e) {
      cell.auc = kNaN;
      cell.error = e.what();
      result.warnings.push_back(fmt::format("{} at P'={}: {}", cell.label(), cell.rate, e.what()));
      continue;
    }
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = cells[*best];
    const bool better =
        cell.auc > b.auc + kTieTolerance ||
        (std::abs(cell.auc - b.auc) <= kTieTolerance &&
         (cell.rate < b.rate ||
          (cell.rate == b.rate && method_rank(cell.method, methods) < method_rank(b.method, methods))));
    if (better) best = i;
  }
  if (!best) throw NumericalError("every Block A cell failed");
  result.winner = *best;
  result.data = materialize_cell(train, cells[*best], cfg, generators);
  result.grid = std::move(cells);
  result.warnings.insert(result.warnings.end(), generators.warnings().begin(),
                         generators.warnings().end());
  return result;
}

BlockBResult block_b_search(const Dataset& processed, const Dataset& validation,
                            std::span<const std::string> variables, const PipelineConfig& cfg) {
  BlockBResult result;
  std::optional<std::size_t> best;
  for (double w : weight_grid(processed.num_positive(), processed.num_negative(),
                              cfg.weight_step)) {
    ScoreConfig score = cfg.score;
    score.sample_weight = w;
    const auto model = build_scorecard(processed, variables, score);
    result.grid.push_back({w, scorecard_auc(model.card, validation)});
    if (!best || result.grid.back().auc > result.grid[*best].auc + kTieTolerance)
      best = result.grid.size() - 1;
  }
  result.weight = result.grid[*best].weight;
  return result;
}

PipelineRecord derive(const Dataset& train, const Dataset& validation,
                      const std::string& test_hash, std::uint64_t split_seed,
                      const PipelineConfig& cfg, const std::vector<MethodSpec>* methods) {
  cfg.validate();
  if (validation.num_positive() == 0 || validation.num_negative() == 0)
    throw ValidationError("validation data must contain both classes");
  if (train.feature_names() != validation.feature_names())
    throw ValidationError("training and validation columns differ");

  PipelineRecord rec;
  rec.version = version();
  rec.config = cfg;
  rec.config_hash = config_hash(cfg);
  rec.split_seed = split_seed;
  rec.train_hash = train.fingerprint();
  rec.validation_hash = validation.fingerprint();
  rec.test_hash = test_hash;
  rec.methods = methods ? *methods : expand_methods(cfg);

  GeneratorCache generators(train, cfg.rebalance.gan, cfg.seed);
  auto block_a = block_a_search(train, validation, rec.methods, cfg, generators);
  rec.intermediate_m = block_a.m;
  rec.block_a = block_a.grid;
  rec.block_a_winner = block_a.winner;
  rec.processed_hash = block_a.data.fingerprint();
  rec.warnings = block_a.warnings;

  rec.ranking = rank_variables(block_a.data, pipeline_rf(cfg));
  const auto vars = top_variables(rec.ranking, static_cast<std::size_t>(rec.intermediate_m));
  if (cfg.weight_search) {
    auto block_b = block_b_search(block_a.data, validation, vars, cfg);
    rec.block_b = block_b.grid;
    rec.weight = block_b.weight;
  } else {
    rec.weight = 1.0;
  }

  ScoreConfig score = cfg.score;
  score.sample_weight = rec.weight;
  const int max_m = cfg.max_m > 0 ? std::min<int>(cfg.max_m, static_cast<int>(rec.ranking.size()))
                                  : static_cast<int>(rec.ranking.size());
  rec.parsimony = parsimony_curve(rec.ranking, block_a.data, validation, max_m, score);
  return rec;
}

PipelineRecord derive(const SplitBundle& bundle, const PipelineConfig& cfg) {
  return derive(bundle.train, bundle.validation, bundle.test.fingerprint(), bundle.seed, cfg);
}

void finalize(PipelineRecord& record, const Dataset& train, int m,
              const CutOverrides& overrides) {
  if (record.ranking.empty()) throw ValidationError("record has not been derived");
  if (m < 1 || static_cast<std::size_t>(m) > record.ranking.size())
    throw ValidationError(
        fmt::format("m must be in [1, {}], got {}", record.ranking.size(), m));
  if (train.fingerprint() != record.train_hash)
    throw ValidationError("training data differ from the data the record was derived on");
  if (record.block_a_winner >= record.block_a.size())
    throw ValidationError("record has no Block A winner");

  GeneratorCache generators(train, record.config.rebalance.gan, record.config.seed);
  const Dataset processed =
      materialize_cell(train, record.block_a[record.block_a_winner], record.config, generators);
  if (processed.fingerprint() != record.processed_hash)
    throw ValidationError("regenerated training data do not match the recorded hash");

  ScoreConfig score = record.config.score;
  score.sample_weight = record.weight;
  const auto vars = top_variables(record.ranking, static_cast<std::size_t>(m));
  auto model = fine_tune(processed, vars, score, overrides);
  record.m = m;
  record.overrides = overrides;
  record.scorecard = std::move(model.card);
  for (auto& w : model.warnings) record.warnings.push_back(std::move(w));
  record.finalized = true;
}

MetricReport evaluate_final(PipelineRecord& record, const Dataset& test) {
  if (!record.finalized) throw ValidationError("record must be finalized before evaluation");
  if (record.test_report)
    throw ValidationError("the test set has already been used for this record");
  if (test.fingerprint() != record.test_hash)
    throw ValidationError("test data differ from the split recorded at derivation");
  BootstrapOptions boot = record.config.bootstrap;
  boot.seed = derive_seed(record.config.seed, "bootstrap");
  const auto scores = score_rows_real(record.scorecard, test);
  record.test_report = evaluate_scores(scores, test.labels(), boot);
  return *record.test_report;
}

int choose_m(const std::vector<ParsimonyPoint>& curve, double tolerance) {
  if (curve.empty()) throw ValidationError("empty parsimony curve");
  double best = -1.0;
  for (const auto& p : curve) best = std::max(best, p.auc);
  for (const auto& p : curve)
    if (p.auc >= best - tolerance) return p.m;
  return curve.back().m;
}

BenchResult run_bench(const SplitBundle& bundle, const PipelineConfig& cfg) {
  cfg.validate();
  BenchResult out;
  const std::string test_hash = bundle.test.fingerprint();

  auto run_model = [&](const std::string& name, PipelineConfig model_cfg,
                       const std::vector<MethodSpec>& methods) {
    auto rec = derive(bundle.train, bundle.validation, test_hash, bundle.seed, model_cfg,
                      &methods);
    const int m = choose_m(rec.parsimony);
    finalize(rec, bundle.train, m);
    BenchRow row;
    row.model = name;
    row.m = m;
    row.validation_auc = rec.parsimony[static_cast<std::size_t>(m - 1)].auc;
    row.report = evaluate_final(rec, bundle.test);
    for (const auto& w : rec.warnings) out.warnings.push_back(fmt::format("{}: {}", name, w));
    out.rows.push_back(std::move(row));
    out.records.push_back(std::move(rec));
  };

  PipelineConfig control = cfg;
  control.methods.clear();
  control.include_control = true;
  control.weight_search = false;
  run_model("AutoScore", control, {});

  BaselineConfig base;
  base.rf = pipeline_rf(cfg);
  base.lr = cfg.score.lr;
  base.bootstrap = cfg.bootstrap;
  base.bootstrap.seed = derive_seed(cfg.seed, "bootstrap");
  const int control_m = out.rows.front().m;
  const auto ranked = out.records.front().ranking;
  const auto parsimony_vars = top_variables(ranked, static_cast<std::size_t>(control_m));

  auto add_baseline = [&](BaselineResult r) {
    BenchRow row;
    row.model = r.name;
    row.m = r.m;
    row.report = std::move(r.report);
    row.validation_auc = kNaN;
    for (const auto& w : r.warnings) out.warnings.push_back(fmt::format("{}: {}", r.name, w));
    out.rows.push_back(std::move(row));
  };
  add_baseline(full_lr(bundle.train, bundle.test, base));
  add_baseline(lasso_lr(bundle.train, bundle.validation, bundle.test, base));
  add_baseline(rf_classifier("Full RF", bundle.train, bundle.test, {}, base));
  add_baseline(rf_classifier("Parsimony RF", bundle.train, bundle.test, parsimony_vars, base));

  // Sub-models in the usual reporting order.
  auto specs = expand_methods(cfg);
  auto rank = [](RebalanceMethod m) {
    constexpr std::array<RebalanceMethod, 7> order{
        RebalanceMethod::kSmote,           RebalanceMethod::kUpsample,
        RebalanceMethod::kDownsample,      RebalanceMethod::kUpsampleDownsample,
        RebalanceMethod::kSmoteDownsample, RebalanceMethod::kGan,
        RebalanceMethod::kGanDownsample};
    return std::find(order.begin(), order.end(), m) - order.begin();
  };
  std::stable_sort(specs.begin(), specs.end(), [&](const MethodSpec& a, const MethodSpec& b) {
    return rank(a.method) < rank(b.method);
  });
  for (const auto& spec : specs) {
    PipelineConfig sub = cfg;
    sub.include_control = false;
    run_model(spec.label(), sub, {spec});
  }
  return out;
}

}  // namespace scorecard
