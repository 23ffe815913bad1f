#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scorecard {

enum class FeatureKind { kContinuous, kCategorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kContinuous;
  /// Level names; non-empty iff kind is categorical.
  std::vector<std::string> categories;

  static FeatureSpec continuous(std::string name);
  static FeatureSpec categorical(std::string name,
                                 std::vector<std::string> levels);

  bool is_categorical() const { return kind == FeatureKind::kCategorical; }
  bool operator==(const FeatureSpec&) const = default;
};

/// How the binary label maps back to the text found in the source file.
struct LabelCoding {
  std::string column = "label";
  std::string negative = "0";
  std::string positive = "1";

  bool operator==(const LabelCoding&) const = default;
};

/// Immutable tabular dataset with a binary label (1 = minority / rare event).
///
/// Values are stored row-major. Continuous features hold finite reals;
/// categorical features hold level indices into FeatureSpec::categories.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<FeatureSpec> features, std::vector<double> values,
          std::vector<std::uint8_t> labels, LabelCoding coding = {});

  std::size_t num_rows() const { return labels_.size(); }
  std::size_t num_features() const { return features_.size(); }
  bool empty() const { return labels_.empty(); }

  const std::vector<FeatureSpec>& features() const { return features_; }
  const FeatureSpec& feature(std::size_t col) const { return features_.at(col); }
  std::vector<std::string> feature_names() const;
  std::optional<std::size_t> find_feature(std::string_view name) const;
  /// Throws ValidationError when the name is unknown.
  std::size_t feature_index(std::string_view name) const;

  double value(std::size_t row, std::size_t col) const {
    return values_[row * features_.size() + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * features_.size(), features_.size()};
  }
  std::span<const double> values() const { return values_; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  std::uint8_t label(std::size_t r) const { return labels_[r]; }
  std::vector<double> column(std::size_t col) const;

  std::size_t num_positive() const { return num_positive_; }
  std::size_t num_negative() const { return num_rows() - num_positive_; }
  /// P = N_p / N; zero for an empty dataset.
  double minority_rate() const;

  /// Row indices of D_p and D_n, ascending.
  std::vector<std::size_t> positive_rows() const;
  std::vector<std::size_t> negative_rows() const;

  const LabelCoding& label_coding() const { return coding_; }
  bool all_continuous() const;

  /// Rows in the given order; repeats allowed.
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Columns in the given order.
  Dataset select_features(std::span<const std::size_t> cols) const;
  /// Columns by name, in the given order.
  Dataset select_features(std::span<const std::string> names) const;
  /// Copy with extra rows appended (row-major values, one label per row).
  Dataset append_rows(std::span<const double> values,
                      std::span<const std::uint8_t> labels) const;
  /// Copy with the rows of `other` appended; schemas must match.
  Dataset concat(const Dataset& other) const;

  /// Content fingerprint over schema, values and labels.
  std::string fingerprint() const;

 private:
  void validate() const;

  std::vector<FeatureSpec> features_;
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
  LabelCoding coding_;
  std::size_t num_positive_ = 0;
};

struct SplitBundle {
  Dataset train;
  Dataset validation;
  Dataset test;
  std::uint64_t seed = 0;
};

/// Per-class row assignment for a stratified split into `ratios.size()`
/// parts. Every part after the first receives floor(ratio * n_class) rows of
/// each class (at least one when the class has enough rows) and the first part
/// takes the remainder. Rows inside each part are ascending.
std::vector<std::vector<std::size_t>> stratified_partition(
    std::span<const std::uint8_t> labels, std::span<const double> ratios,
    std::uint64_t seed);

SplitBundle stratified_split(const Dataset& ds,
                             const std::array<double, 3>& ratios,
                             std::uint64_t seed);

struct SyntheticSpec {
  std::size_t n = 1000;
  double minority_rate = 0.1;
  std::size_t n_informative = 1;
  std::size_t n_noise = 0;
  /// Class-conditional mean shift of informative features, in SD units.
  double effect_size = 1.0;
  std::uint64_t seed = 0;
};

/// Gaussian rare-event generator. Informative features are named
/// signal_1..k, noise features noise_1..k.
Dataset make_synthetic(const SyntheticSpec& spec);

/// Rounds half away from zero to the nearest integer.
long long round_half_away(double x);

}  // namespace scorecard
