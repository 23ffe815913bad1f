#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "scorecard/dataset.hpp"
#include "scorecard/tabgan.hpp"

namespace scorecard {

/// Training-data rebalancing methods, in the conventional listing order.
enum class RebalanceMethod {
  kDownsample,
  kUpsample,
  kSmote,
  kGan,
  kUpsampleDownsample,
  kSmoteDownsample,
  kGanDownsample,
};

inline constexpr std::array<RebalanceMethod, 7> kAllMethods{
    RebalanceMethod::kDownsample,         RebalanceMethod::kUpsample,
    RebalanceMethod::kSmote,              RebalanceMethod::kGan,
    RebalanceMethod::kUpsampleDownsample, RebalanceMethod::kSmoteDownsample,
    RebalanceMethod::kGanDownsample};

/// "DS", "US", "SMOTE", "GAN", "US+DS", "SMOTE+DS", "GAN+DS".
std::string_view method_name(RebalanceMethod method);
RebalanceMethod parse_method(std::string_view name);
bool is_hybrid(RebalanceMethod method);
bool uses_gan(RebalanceMethod method);
/// Augmentation stage of a hybrid method (US, SMOTE or GAN); identity otherwise.
RebalanceMethod base_method(RebalanceMethod method);

/// Count arithmetic for one rebalancing run.
///
/// Augmenting methods target N'_p = round(N_n / (1 - P') - N_n) minority rows
/// and keep every majority row; down-sampling targets
/// N'_n = round(N_p / P' - N_p) majority rows and keeps every minority row.
/// N'_p = alpha * N_p + remainder with 0 <= remainder < N_p. Hybrid plans
/// first augment to the midpoint rate (P + P') / 2, then down-sample.
struct RebalancePlan {
  RebalanceMethod method = RebalanceMethod::kDownsample;
  double source_rate = 0.0;  // P
  double target_rate = 0.0;  // P'
  long long n_pos = 0;       // N_p
  long long n_neg = 0;       // N_n
  long long target_pos = 0;  // final minority count
  long long target_neg = 0;  // final majority count
  long long alpha = 1;
  long long remainder = 0;
  /// Hybrid plans only: rate and minority count after the augmentation stage.
  double intermediate_rate = 0.0;
  long long intermediate_pos = 0;

  /// Minority rows that the method synthesizes or replicates.
  long long extra_minority() const { return target_pos - n_pos; }
};

/// Throws ValidationError unless P < P' <= 0.5, N_p >= 1 and N_n >= 1.
RebalancePlan make_plan(RebalanceMethod method, long long n_pos, long long n_neg,
                        double target_rate);
RebalancePlan make_plan(RebalanceMethod method, const Dataset& train,
                        double target_rate);

struct SmoteConfig {
  int k_neighbors = 5;
};

struct RebalanceOptions {
  SmoteConfig smote;
  GanConfig gan;
};

/// D_p plus N'_n majority rows drawn without replacement; source row order kept.
Dataset downsample(const Dataset& train, const RebalancePlan& plan,
                   std::uint64_t seed);

/// D followed by (alpha - 1) copies of D_p and `remainder` distinct D_p rows.
Dataset upsample(const Dataset& train, const RebalancePlan& plan,
                 std::uint64_t seed);

/// D followed by (alpha - 1) SMOTE rows from every minority row and one SMOTE
/// row from each of `remainder` distinct minority rows. Neighbours are the
/// k nearest minority rows in z-scored space (statistics of all of D, ties by
/// row order); each synthetic row is x_i + L (x_j - x_i) with L in (0, 1).
Dataset smote_augment(const Dataset& train, const RebalancePlan& plan,
                      const SmoteConfig& cfg, std::uint64_t seed);

/// D followed by N'_p - N_p generator rows.
Dataset gan_augment(const Dataset& train, const RebalancePlan& plan,
                    const Generator& generator, std::uint64_t seed);

/// Two-stage hybrid: augment with `plan`'s base method to the intermediate
/// rate, then down-sample the majority to `plan.target_neg`.
/// GAN+DS trains on D_p with options.gan unless `generator` is supplied.
Dataset hybrid_augment(const Dataset& train, const RebalancePlan& plan,
                       const RebalanceOptions& options, std::uint64_t seed,
                       const Generator* generator = nullptr);

/// Dispatches on plan.method. GAN methods train a generator on D_p with
/// options.gan unless `generator` is supplied.
Dataset rebalance(const Dataset& train, const RebalancePlan& plan,
                  const RebalanceOptions& options, std::uint64_t seed,
                  const Generator* generator = nullptr);

}  // namespace scorecard
