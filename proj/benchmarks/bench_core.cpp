#include <benchmark/benchmark.h>

#include <vector>

#include "scorecard/categorize.hpp"
#include "scorecard/dataset.hpp"
#include "scorecard/evalmetrics.hpp"
#include "scorecard/forest.hpp"
#include "scorecard/logistic.hpp"
#include "scorecard/random.hpp"
#include "scorecard/rebalance.hpp"
#include "scorecard/tabgan.hpp"

using namespace scorecard;

namespace {

Dataset synthetic(std::size_t n, double rate = 0.05) {
  return make_synthetic({.n = n, .minority_rate = rate, .n_informative = 5, .n_noise = 16,
                         .effect_size = 1.0, .seed = 1});
}

void BM_WeightedLr(benchmark::State& state) {
  const auto raw = synthetic(static_cast<std::size_t>(state.range(0)));
  const std::vector<std::string> vars{"signal_1", "signal_2", "signal_3", "signal_4", "signal_5"};
  const auto cat = categorize(raw, vars, kDefaultQuantiles);
  for (auto _ : state) benchmark::DoNotOptimize(fit_weighted_lr(cat.data, 3.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeightedLr)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_RankVariables(benchmark::State& state) {
  const auto raw = synthetic(static_cast<std::size_t>(state.range(0)));
  RfConfig cfg;
  cfg.n_trees = 50;
  for (auto _ : state) benchmark::DoNotOptimize(rank_variables(raw, cfg));
}
BENCHMARK(BM_RankVariables)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Smote(benchmark::State& state) {
  const auto raw = synthetic(static_cast<std::size_t>(state.range(0)), 0.02);
  const auto plan = make_plan(RebalanceMethod::kSmote, raw, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(smote_augment(raw, plan, {}, 5));
}
BENCHMARK(BM_Smote)->Arg(5000)->Arg(40000)->Unit(benchmark::kMillisecond);

void BM_GanEpochs(benchmark::State& state) {
  const auto raw = synthetic(20000, 0.02);
  const auto pos = raw.positive_rows();
  const auto minority = raw.subset(pos);
  GanConfig cfg;
  cfg.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_gan(minority, cfg));
}
BENCHMARK(BM_GanEpochs)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_RocAuc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> s(n);
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng.uniform01() < 0.1 ? 1 : 0;
    s[i] = std::round(10 * (rng.normal() + y[i]));
  }
  for (auto _ : state) benchmark::DoNotOptimize(roc_auc(s, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

void BM_BootstrapReport(benchmark::State& state) {
  Rng rng(4);
  const std::size_t n = 8000;
  std::vector<double> s(n);
  std::vector<std::uint8_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rng.uniform01() < 0.05 ? 1 : 0;
    s[i] = std::round(10 * (rng.normal() + 1.5 * y[i]));
  }
  BootstrapOptions boot;
  boot.replicates = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_scores(s, y, boot));
}
BENCHMARK(BM_BootstrapReport)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
