#include "scorecard/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "scorecard/error.hpp"
#include "scorecard/hash.hpp"
#include "scorecard/random.hpp"

namespace scorecard {

FeatureSpec FeatureSpec::continuous(std::string name) {
  return FeatureSpec{std::move(name), FeatureKind::kContinuous, {}};
}

FeatureSpec FeatureSpec::categorical(std::string name,
                                     std::vector<std::string> levels) {
  return FeatureSpec{std::move(name), FeatureKind::kCategorical,
                     std::move(levels)};
}

Dataset::Dataset(std::vector<FeatureSpec> features, std::vector<double> values,
                 std::vector<std::uint8_t> labels, LabelCoding coding)
    : features_(std::move(features)),
      values_(std::move(values)),
      labels_(std::move(labels)),
      coding_(std::move(coding)) {
  validate();
  num_positive_ = static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

void Dataset::validate() const {
  std::unordered_set<std::string> names;
  for (const auto& f : features_) {
    if (f.name.empty()) throw ValidationError("feature with empty name");
    if (!names.insert(f.name).second)
      throw ValidationError(fmt::format("duplicate feature name '{}'", f.name));
    if (f.is_categorical() && f.categories.empty())
      throw ValidationError(
          fmt::format("categorical feature '{}' has no levels", f.name));
    if (!f.is_categorical() && !f.categories.empty())
      throw ValidationError(
          fmt::format("continuous feature '{}' carries levels", f.name));
  }
  if (values_.size() != labels_.size() * features_.size())
    throw ValidationError(fmt::format(
        "value count {} does not match {} rows x {} features", values_.size(),
        labels_.size(), features_.size()));
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    if (labels_[r] > 1)
      throw ValidationError(fmt::format("row {}: label is not binary", r));
    for (std::size_t c = 0; c < features_.size(); ++c) {
      double v = values_[r * features_.size() + c];
      if (!std::isfinite(v))
        throw ValidationError(fmt::format("row {}, feature '{}': non-finite value",
                                          r, features_[c].name));
      if (features_[c].is_categorical()) {
        if (v != std::floor(v) || v < 0 ||
            v >= static_cast<double>(features_[c].categories.size()))
          throw ValidationError(fmt::format(
              "row {}, feature '{}': invalid level index {}", r,
              features_[c].name, v));
      }
    }
  }
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> names;
  names.reserve(features_.size());
  for (const auto& f : features_) names.push_back(f.name);
  return names;
}

std::optional<std::size_t> Dataset::find_feature(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Dataset::feature_index(std::string_view name) const {
  if (auto idx = find_feature(name)) return *idx;
  throw ValidationError(fmt::format("unknown feature '{}'", name));
}

std::vector<double> Dataset::column(std::size_t col) const {
  std::vector<double> out(num_rows());
  for (std::size_t r = 0; r < num_rows(); ++r) out[r] = value(r, col);
  return out;
}

double Dataset::minority_rate() const {
  if (labels_.empty()) return 0.0;
  return static_cast<double>(num_positive_) / static_cast<double>(num_rows());
}

std::vector<std::size_t> Dataset::positive_rows() const {
  std::vector<std::size_t> out;
  out.reserve(num_positive_);
  for (std::size_t r = 0; r < labels_.size(); ++r)
    if (labels_[r] == 1) out.push_back(r);
  return out;
}

std::vector<std::size_t> Dataset::negative_rows() const {
  std::vector<std::size_t> out;
  out.reserve(num_negative());
  for (std::size_t r = 0; r < labels_.size(); ++r)
    if (labels_[r] == 0) out.push_back(r);
  return out;
}

bool Dataset::all_continuous() const {
  return std::none_of(features_.begin(), features_.end(),
                      [](const FeatureSpec& f) { return f.is_categorical(); });
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  const std::size_t p = num_features();
  std::vector<double> values;
  values.reserve(rows.size() * p);
  std::vector<std::uint8_t> labels;
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= num_rows())
      throw ValidationError(fmt::format("subset: row {} out of range", r));
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    labels.push_back(labels_[r]);
  }
  return Dataset(features_, std::move(values), std::move(labels), coding_);
}

Dataset Dataset::select_features(std::span<const std::size_t> cols) const {
  std::vector<FeatureSpec> features;
  features.reserve(cols.size());
  for (std::size_t c : cols) features.push_back(features_.at(c));
  std::vector<double> values;
  values.reserve(num_rows() * cols.size());
  for (std::size_t r = 0; r < num_rows(); ++r)
    for (std::size_t c : cols) values.push_back(value(r, c));
  return Dataset(std::move(features), std::move(values), labels_, coding_);
}

Dataset Dataset::select_features(std::span<const std::string> names) const {
  std::vector<std::size_t> cols;
  cols.reserve(names.size());
  for (const auto& name : names) cols.push_back(feature_index(name));
  return select_features(std::span<const std::size_t>(cols));
}

Dataset Dataset::append_rows(std::span<const double> values,
                             std::span<const std::uint8_t> labels) const {
  std::vector<double> all(values_);
  all.insert(all.end(), values.begin(), values.end());
  std::vector<std::uint8_t> all_labels(labels_);
  all_labels.insert(all_labels.end(), labels.begin(), labels.end());
  return Dataset(features_, std::move(all), std::move(all_labels), coding_);
}

Dataset Dataset::concat(const Dataset& other) const {
  if (other.features_ != features_)
    throw ValidationError("concat: feature schemas differ");
  return append_rows(other.values_, other.labels_);
}

std::string Dataset::fingerprint() const {
  Fnv1a h;
  h.update_u64(features_.size());
  for (const auto& f : features_) {
    h.update(f.name);
    h.update_u64(f.is_categorical() ? 1 : 0);
    for (const auto& level : f.categories) h.update(level);
  }
  h.update_u64(labels_.size());
  for (double v : values_) h.update_double(v);
  h.update(std::span(labels_.data(), labels_.size()));
  return h.hex();
}

std::vector<std::vector<std::size_t>> stratified_partition(
    std::span<const std::uint8_t> labels, std::span<const double> ratios,
    std::uint64_t seed) {
  const std::size_t parts = ratios.size();
  if (parts == 0) throw ValidationError("split: no parts requested");
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw ValidationError("split: ratios must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError(
        fmt::format("split: ratios sum to {}, expected 1", total));

  std::vector<std::vector<std::size_t>> out(parts);
  Rng rng(seed);
  for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) rows.push_back(i);
    const std::size_t n = rows.size();
    if (n < parts)
      throw ValidationError(fmt::format(
          "split: class {} has {} rows, fewer than the {} requested parts",
          static_cast<int>(cls), n, parts));
    rng.shuffle(rows);

    std::vector<std::size_t> counts(parts, 0);
    std::size_t assigned = 0;
    for (std::size_t k = 1; k < parts; ++k) {
      counts[k] = static_cast<std::size_t>(
          std::floor(ratios[k] * static_cast<double>(n) + 1e-9));
      counts[k] = std::max<std::size_t>(counts[k], 1);
      assigned += counts[k];
    }
    while (assigned >= n) {
      // Keep at least one row for the first part.
      auto largest = std::max_element(counts.begin() + 1, counts.end());
      --*largest;
      --assigned;
    }
    counts[0] = n - assigned;

    std::size_t offset = 0;
    for (std::size_t k = 0; k < parts; ++k) {
      out[k].insert(out[k].end(), rows.begin() + offset,
                    rows.begin() + offset + counts[k]);
      offset += counts[k];
    }
  }
  for (auto& part : out) std::sort(part.begin(), part.end());
  return out;
}

SplitBundle stratified_split(const Dataset& ds,
                             const std::array<double, 3>& ratios,
                             std::uint64_t seed) {
  auto parts = stratified_partition(ds.labels(), ratios, seed);
  return SplitBundle{ds.subset(parts[0]), ds.subset(parts[1]),
                     ds.subset(parts[2]), seed};
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (!(spec.minority_rate > 0.0 && spec.minority_rate <= 0.5))
    throw ValidationError("make_synthetic: minority_rate must be in (0, 0.5]");
  if (spec.n_informative < 1)
    throw ValidationError("make_synthetic: need at least one informative feature");
  if (spec.n == 0) throw ValidationError("make_synthetic: n must be positive");
  if (!std::isfinite(spec.effect_size))
    throw ValidationError("make_synthetic: effect_size must be finite");

  const auto n_pos = static_cast<std::size_t>(
      round_half_away(static_cast<double>(spec.n) * spec.minority_rate));
  Rng rng(spec.seed);
  std::vector<std::uint8_t> labels(spec.n, 0);
  for (std::size_t r : rng.sample_without_replacement(spec.n, n_pos))
    labels[r] = 1;

  std::vector<FeatureSpec> features;
  for (std::size_t i = 1; i <= spec.n_informative; ++i)
    features.push_back(FeatureSpec::continuous(fmt::format("signal_{}", i)));
  for (std::size_t i = 1; i <= spec.n_noise; ++i)
    features.push_back(FeatureSpec::continuous(fmt::format("noise_{}", i)));

  const std::size_t p = features.size();
  std::vector<double> values(spec.n * p);
  for (std::size_t r = 0; r < spec.n; ++r) {
    const double shift = labels[r] ? spec.effect_size : 0.0;
    for (std::size_t c = 0; c < p; ++c) {
      double v = rng.normal();
      if (c < spec.n_informative) v += shift;
      values[r * p + c] = v;
    }
  }
  return Dataset(std::move(features), std::move(values), std::move(labels));
}

long long round_half_away(double x) {
  return static_cast<long long>(std::round(x));
}

}  // namespace scorecard
