#include "scorecard/rebalance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "scorecard/error.hpp"
#include "scorecard/random.hpp"

namespace scorecard {

namespace {

long long augmented_minority(long long n_neg, double rate) {
  const double nn = static_cast<double>(n_neg);
  return round_half_away(nn / (1.0 - rate) - nn);
}

long long downsampled_majority(long long n_pos, double rate) {
  const double np = static_cast<double>(n_pos);
  return round_half_away(np / rate - np);
}

void require_method(const RebalancePlan& plan, RebalanceMethod expected) {
  if (plan.method != expected)
    throw ValidationError(fmt::format("plan method is {}, expected {}",
                                      method_name(plan.method), method_name(expected)));
}

void require_counts(const Dataset& train, const RebalancePlan& plan) {
  if (static_cast<long long>(train.num_positive()) != plan.n_pos ||
      static_cast<long long>(train.num_negative()) != plan.n_neg)
    throw ValidationError(fmt::format(
        "plan was built for N_p={}, N_n={} but data has N_p={}, N_n={}", plan.n_pos,
        plan.n_neg, train.num_positive(), train.num_negative()));
}

// All minority rows plus `keep` majority rows drawn without replacement.
Dataset sample_majority(const Dataset& ds, long long keep, Rng& rng) {
  const auto negatives = ds.negative_rows();
  if (keep < 0 || static_cast<std::size_t>(keep) > negatives.size())
    throw ValidationError(fmt::format("cannot keep {} of {} majority rows", keep,
                                      negatives.size()));
  std::vector<char> selected(ds.num_rows(), 0);
  for (std::size_t r = 0; r < ds.num_rows(); ++r)
    if (ds.label(r) == 1) selected[r] = 1;
  for (std::size_t k : rng.sample_without_replacement(negatives.size(),
                                                      static_cast<std::size_t>(keep)))
    selected[negatives[k]] = 1;
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < ds.num_rows(); ++r)
    if (selected[r]) rows.push_back(r);
  return ds.subset(rows);
}

// Plan for the augmentation stage of a hybrid, expressed as a plain plan.
RebalancePlan stage_one(const RebalancePlan& plan) {
  RebalancePlan stage = plan;
  stage.method = base_method(plan.method);
  stage.target_rate = plan.intermediate_rate;
  stage.target_pos = plan.intermediate_pos;
  stage.target_neg = plan.n_neg;
  return stage;
}

}  // namespace

std::string_view method_name(RebalanceMethod method) {
  switch (method) {
    case RebalanceMethod::kDownsample: return "DS";
    case RebalanceMethod::kUpsample: return "US";
    case RebalanceMethod::kSmote: return "SMOTE";
    case RebalanceMethod::kGan: return "GAN";
    case RebalanceMethod::kUpsampleDownsample: return "US+DS";
    case RebalanceMethod::kSmoteDownsample: return "SMOTE+DS";
    case RebalanceMethod::kGanDownsample: return "GAN+DS";
  }
  return "?";
}

RebalanceMethod parse_method(std::string_view name) {
  for (auto m : kAllMethods)
    if (method_name(m) == name) return m;
  throw ValidationError(fmt::format(
      "unknown rebalancing method '{}' (expected DS, US, SMOTE, GAN, US+DS, SMOTE+DS, GAN+DS)",
      name));
}

bool is_hybrid(RebalanceMethod method) {
  return method == RebalanceMethod::kUpsampleDownsample ||
         method == RebalanceMethod::kSmoteDownsample ||
         method == RebalanceMethod::kGanDownsample;
}

bool uses_gan(RebalanceMethod method) {
  return method == RebalanceMethod::kGan || method == RebalanceMethod::kGanDownsample;
}

RebalanceMethod base_method(RebalanceMethod method) {
  switch (method) {
    case RebalanceMethod::kUpsampleDownsample: return RebalanceMethod::kUpsample;
    case RebalanceMethod::kSmoteDownsample: return RebalanceMethod::kSmote;
    case RebalanceMethod::kGanDownsample: return RebalanceMethod::kGan;
    default: return method;
  }
}

RebalancePlan make_plan(RebalanceMethod method, long long n_pos, long long n_neg,
                        double target_rate) {
  if (n_pos < 1 || n_neg < 1)
    throw ValidationError(fmt::format(
        "rebalancing needs both classes (N_p={}, N_n={})", n_pos, n_neg));
  RebalancePlan plan;
  plan.method = method;
  plan.n_pos = n_pos;
  plan.n_neg = n_neg;
  plan.source_rate = static_cast<double>(n_pos) / static_cast<double>(n_pos + n_neg);
  plan.target_rate = target_rate;
  if (!(target_rate > plan.source_rate))
    throw ValidationError(fmt::format(
        "target minority rate {} must exceed the source rate {}", target_rate,
        plan.source_rate));
  if (target_rate > 0.5)
    throw ValidationError(fmt::format("target minority rate {} exceeds 0.5", target_rate));

  auto split = [&](long long pos) {
    plan.alpha = pos / n_pos;
    plan.remainder = pos % n_pos;
  };

  if (method == RebalanceMethod::kDownsample) {
    plan.target_pos = n_pos;
    plan.target_neg = std::min(downsampled_majority(n_pos, target_rate), n_neg);
    split(n_pos);
  } else if (is_hybrid(method)) {
    plan.intermediate_rate = 0.5 * (plan.source_rate + target_rate);
    plan.intermediate_pos =
        std::max(augmented_minority(n_neg, plan.intermediate_rate), n_pos);
    plan.target_pos = plan.intermediate_pos;
    plan.target_neg =
        std::min(downsampled_majority(plan.intermediate_pos, target_rate), n_neg);
    split(plan.intermediate_pos);
  } else {
    plan.target_pos = std::max(augmented_minority(n_neg, target_rate), n_pos);
    plan.target_neg = n_neg;
    split(plan.target_pos);
  }
  return plan;
}

RebalancePlan make_plan(RebalanceMethod method, const Dataset& train,
                        double target_rate) {
  return make_plan(method, static_cast<long long>(train.num_positive()),
                   static_cast<long long>(train.num_negative()), target_rate);
}

Dataset downsample(const Dataset& train, const RebalancePlan& plan,
                   std::uint64_t seed) {
  require_method(plan, RebalanceMethod::kDownsample);
  require_counts(train, plan);
  Rng rng(seed);
  return sample_majority(train, plan.target_neg, rng);
}

Dataset upsample(const Dataset& train, const RebalancePlan& plan,
                 std::uint64_t seed) {
  require_method(plan, RebalanceMethod::kUpsample);
  require_counts(train, plan);
  const auto positives = train.positive_rows();
  std::vector<std::size_t> extra;
  for (long long copy = 1; copy < plan.alpha; ++copy)
    extra.insert(extra.end(), positives.begin(), positives.end());
  Rng rng(seed);
  for (std::size_t k : rng.sample_without_replacement(
           positives.size(), static_cast<std::size_t>(plan.remainder)))
    extra.push_back(positives[k]);
  std::vector<std::size_t> rows(train.num_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  rows.insert(rows.end(), extra.begin(), extra.end());
  return train.subset(rows);
}

Dataset smote_augment(const Dataset& train, const RebalancePlan& plan,
                      const SmoteConfig& cfg, std::uint64_t seed) {
  require_method(plan, RebalanceMethod::kSmote);
  require_counts(train, plan);
  if (!train.all_continuous())
    throw ValidationError("smote: categorical features are not supported");
  const auto positives = train.positive_rows();
  const std::size_t n_pos = positives.size();
  if (cfg.k_neighbors < 1 || static_cast<std::size_t>(cfg.k_neighbors) >= n_pos)
    throw ValidationError(fmt::format(
        "smote: k_neighbors={} needs more than k minority rows (have {})",
        cfg.k_neighbors, n_pos));
  if (plan.extra_minority() == 0) return train;

  const std::size_t p = train.num_features();
  const std::size_t k = static_cast<std::size_t>(cfg.k_neighbors);

  // z-score with statistics of the whole training set.
  std::vector<double> mean(p, 0.0), scale(p, 1.0);
  const double n = static_cast<double>(train.num_rows());
  for (std::size_t c = 0; c < p; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < train.num_rows(); ++r) s += train.value(r, c);
    mean[c] = s / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < train.num_rows(); ++r) {
      double d = train.value(r, c) - mean[c];
      ss += d * d;
    }
    double sd = std::sqrt(ss / n);
    scale[c] = sd > 0.0 ? sd : 1.0;
  }
  std::vector<double> z(n_pos * p);
  for (std::size_t i = 0; i < n_pos; ++i)
    for (std::size_t c = 0; c < p; ++c)
      z[i * p + c] = (train.value(positives[i], c) - mean[c]) / scale[c];

  std::vector<std::vector<std::size_t>> neighbours(n_pos);
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < n_pos; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < n_pos; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (std::size_t c = 0; c < p; ++c) {
        double d = z[i * p + c] - z[j * p + c];
        d2 += d * d;
      }
      dist.emplace_back(d2, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    for (std::size_t t = 0; t < k; ++t) neighbours[i].push_back(dist[t].second);
  }

  Rng rng(seed);
  std::vector<double> synthetic;
  synthetic.reserve(static_cast<std::size_t>(plan.extra_minority()) * p);
  auto emit = [&](std::size_t i) {
    const std::size_t j = neighbours[i][rng.uniform_index(k)];
    const double gap = rng.uniform_open01();
    auto xi = train.row(positives[i]);
    auto xj = train.row(positives[j]);
    for (std::size_t c = 0; c < p; ++c) synthetic.push_back(xi[c] + gap * (xj[c] - xi[c]));
  };
  for (long long rep = 1; rep < plan.alpha; ++rep)
    for (std::size_t i = 0; i < n_pos; ++i) emit(i);
  for (std::size_t i :
       rng.sample_without_replacement(n_pos, static_cast<std::size_t>(plan.remainder)))
    emit(i);

  std::vector<std::uint8_t> labels(synthetic.size() / p, 1);
  return train.append_rows(synthetic, labels);
}

Dataset gan_augment(const Dataset& train, const RebalancePlan& plan,
                    const Generator& generator, std::uint64_t seed) {
  require_method(plan, RebalanceMethod::kGan);
  require_counts(train, plan);
  if (generator.feature_names != train.feature_names())
    throw ValidationError("gan: generator was trained on a different schema");
  const auto rows =
      generate(generator, static_cast<std::size_t>(plan.extra_minority()), seed);
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(rows.rows()), 1);
  return train.append_rows(std::span(rows.data(), static_cast<std::size_t>(rows.size())),
                           labels);
}

Dataset hybrid_augment(const Dataset& train, const RebalancePlan& plan,
                       const RebalanceOptions& options, std::uint64_t seed,
                       const Generator* generator) {
  if (!is_hybrid(plan.method))
    throw ValidationError(fmt::format("{} is not a hybrid method", method_name(plan.method)));
  require_counts(train, plan);
  const Dataset intermediate = rebalance(train, stage_one(plan), options,
                                         derive_seed(seed, "hybrid-augment"), generator);
  Rng rng(derive_seed(seed, "hybrid-downsample"));
  return sample_majority(intermediate, plan.target_neg, rng);
}

Dataset rebalance(const Dataset& train, const RebalancePlan& plan,
                  const RebalanceOptions& options, std::uint64_t seed,
                  const Generator* generator) {
  switch (plan.method) {
    case RebalanceMethod::kDownsample: return downsample(train, plan, seed);
    case RebalanceMethod::kUpsample: return upsample(train, plan, seed);
    case RebalanceMethod::kSmote: return smote_augment(train, plan, options.smote, seed);
    case RebalanceMethod::kGan: {
      if (generator) return gan_augment(train, plan, *generator, seed);
      const auto trained = train_gan(train.subset(train.positive_rows()), options.gan);
      return gan_augment(train, plan, trained.generator, seed);
    }
    case RebalanceMethod::kUpsampleDownsample:
    case RebalanceMethod::kSmoteDownsample:
    case RebalanceMethod::kGanDownsample:
      return hybrid_augment(train, plan, options, seed, generator);
  }
  throw ValidationError("unknown rebalancing method");
}

}  // namespace scorecard
