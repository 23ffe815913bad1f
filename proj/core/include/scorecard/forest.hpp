#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scorecard/dataset.hpp"

namespace scorecard {

struct RfConfig {
  int n_trees = 100;
  /// Features tried per split; 0 selects floor(sqrt(p)).
  int mtry = 0;
  /// Minimum rows in each child of a split.
  int min_leaf = 5;
  std::optional<int> max_depth;
  /// Split candidates per feature; features with fewer distinct values are
  /// split exactly.
  int max_bins = 256;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  void validate(std::size_t n_features) const;
};

/// floor(sqrt(p)), at least 1.
int default_mtry(std::size_t n_features);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when value < threshold
  int left = -1;
  int right = -1;
  double positive_fraction = 0.0;
};

/// Classification forest with Gini splits. Categorical features are split
/// on their level index as an ordinal value.
class RandomForest {
 public:
  /// Trains on the named features of `train` (all features when empty).
  static RandomForest fit(const Dataset& train, const RfConfig& cfg,
                          std::span<const std::string> features = {});

  /// Fraction of trees voting positive (leaf majority; a 50/50 leaf casts
  /// half a vote). `data` must contain every training feature by name.
  std::vector<double> predict(const Dataset& data) const;

  /// Mean decrease in Gini impurity per training feature, averaged over
  /// trees and normalized by the bootstrap sample size.
  const std::vector<double>& importance() const { return importance_; }
  const std::vector<std::string>& feature_names() const { return features_; }

  /// Out-of-bag vote fraction per training row; NaN for rows that were in
  /// every bootstrap sample.
  const std::vector<double>& oob_scores() const { return oob_scores_; }

  std::size_t num_trees() const { return trees_.size(); }

 private:
  std::vector<std::string> features_;
  std::vector<std::vector<TreeNode>> trees_;
  std::vector<double> importance_;
  std::vector<double> oob_scores_;
};

struct RankedVariable {
  std::string name;
  double importance = 0.0;
};

/// All features by descending importance; ties broken by name.
/// Throws ValidationError unless both classes are present.
std::vector<RankedVariable> rank_variables(const Dataset& train, const RfConfig& cfg);

std::vector<std::string> top_variables(const std::vector<RankedVariable>& ranked,
                                       std::size_t m);

}  // namespace scorecard
