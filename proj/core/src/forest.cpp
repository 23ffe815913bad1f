#include "scorecard/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "scorecard/error.hpp"
#include "scorecard/random.hpp"

namespace scorecard {

namespace {

// Sorted split candidates for one feature plus each training row's bin.
// bin(x) = number of edges <= x, so "bin <= b" is equivalent to x < edges[b].
struct BinnedFeature {
  std::vector<double> edges;
  std::vector<std::uint16_t> bins;
};

double midpoint(double a, double b) {
  double mid = a + (b - a) / 2.0;
  return mid > a ? mid : b;
}

BinnedFeature bin_feature(const std::vector<double>& values, int max_bins) {
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> unique(sorted);
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  BinnedFeature out;
  if (unique.size() <= static_cast<std::size_t>(max_bins)) {
    for (std::size_t i = 0; i + 1 < unique.size(); ++i)
      out.edges.push_back(midpoint(unique[i], unique[i + 1]));
  } else {
    // Edges at data quantiles, moved to the next gap between distinct values.
    const std::size_t n = sorted.size();
    for (int k = 1; k < max_bins; ++k) {
      std::size_t pos = static_cast<std::size_t>(k) * n / static_cast<std::size_t>(max_bins);
      double low = sorted[pos - 1];
      auto next = std::upper_bound(unique.begin(), unique.end(), low);
      if (next == unique.end()) break;
      double edge = midpoint(low, *next);
      if (out.edges.empty() || edge > out.edges.back()) out.edges.push_back(edge);
    }
  }
  out.bins.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out.bins[i] = static_cast<std::uint16_t>(
        std::upper_bound(out.edges.begin(), out.edges.end(), values[i]) -
        out.edges.begin());
  return out;
}

double node_impurity(double n, double pos) {
  return n > 0 ? 2.0 * pos * (n - pos) / n : 0.0;
}

double leaf_vote(double positive_fraction) {
  if (positive_fraction > 0.5) return 1.0;
  if (positive_fraction == 0.5) return 0.5;
  return 0.0;
}

double tree_vote(const std::vector<TreeNode>& tree, std::span<const double> row,
                 std::span<const std::size_t> columns) {
  int id = 0;
  while (tree[static_cast<std::size_t>(id)].feature >= 0) {
    const auto& node = tree[static_cast<std::size_t>(id)];
    double x = row[columns[static_cast<std::size_t>(node.feature)]];
    id = x < node.threshold ? node.left : node.right;
  }
  return leaf_vote(tree[static_cast<std::size_t>(id)].positive_fraction);
}

struct Split {
  int feature = -1;
  int bin = -1;
  double decrease = 0.0;
};

class TreeGrower {
 public:
  TreeGrower(const std::vector<BinnedFeature>& features,
             std::span<const std::uint8_t> labels, const RfConfig& cfg, int mtry)
      : features_(features), labels_(labels), cfg_(cfg), mtry_(mtry) {
    std::size_t max_bins = 1;
    for (const auto& f : features_) max_bins = std::max(max_bins, f.edges.size() + 1);
    count_.assign(max_bins, 0.0);
    positive_.assign(max_bins, 0.0);
    order_.resize(features_.size());
  }

  std::vector<TreeNode> grow(std::vector<std::uint32_t> sample, Rng& rng,
                             std::vector<double>& importance) {
    std::vector<TreeNode> nodes;
    nodes.emplace_back();
    struct Task {
      int node;
      std::size_t begin, end;
      int depth;
    };
    std::vector<Task> stack{{0, 0, sample.size(), 0}};
    while (!stack.empty()) {
      Task task = stack.back();
      stack.pop_back();
      const std::size_t n = task.end - task.begin;
      double pos = 0.0;
      for (std::size_t i = task.begin; i < task.end; ++i) pos += labels_[sample[i]];
      auto& node = nodes[static_cast<std::size_t>(task.node)];
      node.positive_fraction = n ? pos / static_cast<double>(n) : 0.0;

      const bool depth_limited = cfg_.max_depth && task.depth >= *cfg_.max_depth;
      if (pos == 0.0 || pos == static_cast<double>(n) ||
          n < 2 * static_cast<std::size_t>(cfg_.min_leaf) || depth_limited)
        continue;

      Split best = find_split(sample, task.begin, task.end, pos, rng);
      if (best.feature < 0) continue;

      const auto& bins = features_[static_cast<std::size_t>(best.feature)].bins;
      auto mid = std::partition(sample.begin() + static_cast<std::ptrdiff_t>(task.begin),
                                sample.begin() + static_cast<std::ptrdiff_t>(task.end),
                                [&](std::uint32_t r) { return bins[r] <= best.bin; });
      const std::size_t split_at = static_cast<std::size_t>(mid - sample.begin());
      importance[static_cast<std::size_t>(best.feature)] += best.decrease;

      const int left = static_cast<int>(nodes.size());
      nodes.emplace_back();
      const int right = static_cast<int>(nodes.size());
      nodes.emplace_back();
      auto& parent = nodes[static_cast<std::size_t>(task.node)];
      parent.feature = best.feature;
      parent.threshold =
          features_[static_cast<std::size_t>(best.feature)].edges[static_cast<std::size_t>(best.bin)];
      parent.left = left;
      parent.right = right;
      stack.push_back({right, split_at, task.end, task.depth + 1});
      stack.push_back({left, task.begin, split_at, task.depth + 1});
    }
    return nodes;
  }

 private:
  Split find_split(const std::vector<std::uint32_t>& sample, std::size_t begin,
                   std::size_t end, double pos, Rng& rng) {
    const double n = static_cast<double>(end - begin);
    const double parent = node_impurity(n, pos);
    const double min_leaf = cfg_.min_leaf;
    std::iota(order_.begin(), order_.end(), 0);
    Split best;
    const std::size_t tries = std::min<std::size_t>(static_cast<std::size_t>(mtry_), order_.size());
    for (std::size_t t = 0; t < tries; ++t) {
      std::size_t pick = t + rng.uniform_index(order_.size() - t);
      std::swap(order_[t], order_[pick]);
      const int f = order_[t];
      const auto& feature = features_[static_cast<std::size_t>(f)];
      const std::size_t n_bins = feature.edges.size() + 1;
      if (n_bins < 2) continue;

      for (std::size_t i = begin; i < end; ++i) {
        const auto b = feature.bins[sample[i]];
        count_[b] += 1.0;
        positive_[b] += labels_[sample[i]];
      }
      double left_n = 0.0, left_pos = 0.0;
      for (std::size_t b = 0; b + 1 < n_bins; ++b) {
        left_n += count_[b];
        left_pos += positive_[b];
        if (count_[b] == 0.0) continue;  // same partition as the previous bin
        const double right_n = n - left_n;
        if (left_n < min_leaf) continue;
        if (right_n < min_leaf) break;
        const double decrease = parent - node_impurity(left_n, left_pos) -
                                node_impurity(right_n, pos - left_pos);
        if (decrease > best.decrease + 1e-12) {
          best = {f, static_cast<int>(b), decrease};
        }
      }
      std::fill(count_.begin(), count_.begin() + static_cast<std::ptrdiff_t>(n_bins), 0.0);
      std::fill(positive_.begin(), positive_.begin() + static_cast<std::ptrdiff_t>(n_bins), 0.0);
    }
    return best;
  }

  const std::vector<BinnedFeature>& features_;
  std::span<const std::uint8_t> labels_;
  const RfConfig& cfg_;
  int mtry_;
  std::vector<double> count_;
  std::vector<double> positive_;
  std::vector<int> order_;
};

}  // namespace

void RfConfig::validate(std::size_t n_features) const {
  if (n_trees < 1) throw ValidationError("rf: n_trees must be >= 1");
  if (mtry < 0 || static_cast<std::size_t>(mtry) > n_features)
    throw ValidationError(fmt::format("rf: mtry must be in [1, {}]", n_features));
  if (min_leaf < 1) throw ValidationError("rf: min_leaf must be >= 1");
  if (max_depth && *max_depth < 0) throw ValidationError("rf: max_depth must be >= 0");
  if (max_bins < 2 || max_bins > 65535)
    throw ValidationError("rf: max_bins must be in [2, 65535]");
}

int default_mtry(std::size_t n_features) {
  int m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features))));
  return std::max(m, 1);
}

RandomForest RandomForest::fit(const Dataset& train, const RfConfig& cfg,
                               std::span<const std::string> features) {
  RandomForest forest;
  std::vector<std::size_t> columns;
  if (features.empty()) {
    for (std::size_t c = 0; c < train.num_features(); ++c) columns.push_back(c);
  } else {
    for (const auto& name : features) columns.push_back(train.feature_index(name));
  }
  if (columns.empty()) throw ValidationError("rf: no features to train on");
  cfg.validate(columns.size());
  if (train.num_positive() == 0 || train.num_negative() == 0)
    throw ValidationError("rf: training data must contain both classes");
  for (std::size_t c : columns) forest.features_.push_back(train.feature(c).name);

  std::vector<BinnedFeature> binned;
  binned.reserve(columns.size());
  for (std::size_t c : columns) binned.push_back(bin_feature(train.column(c), cfg.max_bins));

  const int mtry = cfg.mtry > 0 ? cfg.mtry : default_mtry(columns.size());
  const std::size_t n = train.num_rows();
  TreeGrower grower(binned, train.labels(), cfg, mtry);
  forest.importance_.assign(columns.size(), 0.0);
  std::vector<double> oob_votes(n, 0.0), oob_trees(n, 0.0);
  std::vector<std::uint32_t> in_bag(n);

  for (int t = 0; t < cfg.n_trees; ++t) {
    Rng rng(derive_seed(cfg.seed, "rf-tree", static_cast<std::uint64_t>(t)));
    std::vector<std::uint32_t> sample(n);
    std::fill(in_bag.begin(), in_bag.end(), 0);
    if (cfg.bootstrap) {
      for (auto& s : sample) {
        s = static_cast<std::uint32_t>(rng.uniform_index(n));
        ++in_bag[s];
      }
    } else {
      std::iota(sample.begin(), sample.end(), 0u);
      std::fill(in_bag.begin(), in_bag.end(), 1);
    }
    std::vector<double> tree_importance(columns.size(), 0.0);
    forest.trees_.push_back(grower.grow(std::move(sample), rng, tree_importance));
    for (std::size_t j = 0; j < columns.size(); ++j)
      forest.importance_[j] += tree_importance[j] / static_cast<double>(n);

    const auto& tree = forest.trees_.back();
    for (std::size_t r = 0; r < n; ++r) {
      if (in_bag[r]) continue;
      oob_votes[r] += tree_vote(tree, train.row(r), columns);
      oob_trees[r] += 1.0;
    }
  }
  for (double& v : forest.importance_) v /= static_cast<double>(cfg.n_trees);
  forest.oob_scores_.resize(n);
  for (std::size_t r = 0; r < n; ++r)
    forest.oob_scores_[r] = oob_trees[r] > 0 ? oob_votes[r] / oob_trees[r]
                                             : std::numeric_limits<double>::quiet_NaN();
  return forest;
}

std::vector<double> RandomForest::predict(const Dataset& data) const {
  std::vector<std::size_t> columns;
  for (const auto& name : features_) columns.push_back(data.feature_index(name));
  std::vector<double> scores(data.num_rows(), 0.0);
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    double votes = 0.0;
    for (const auto& tree : trees_) votes += tree_vote(tree, data.row(r), columns);
    scores[r] = votes / static_cast<double>(trees_.size());
  }
  return scores;
}

std::vector<RankedVariable> rank_variables(const Dataset& train, const RfConfig& cfg) {
  if (train.num_positive() == 0 || train.num_negative() == 0)
    throw ValidationError("rank_variables: training data must contain both classes");
  const auto forest = RandomForest::fit(train, cfg);
  std::vector<RankedVariable> ranked;
  for (std::size_t j = 0; j < forest.feature_names().size(); ++j)
    ranked.push_back({forest.feature_names()[j], forest.importance()[j]});
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.importance != b.importance) return a.importance > b.importance;
    return a.name < b.name;
  });
  return ranked;
}

std::vector<std::string> top_variables(const std::vector<RankedVariable>& ranked,
                                       std::size_t m) {
  if (m > ranked.size())
    throw ValidationError(fmt::format("requested {} variables but only {} are ranked", m,
                                      ranked.size()));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(ranked[i].name);
  return out;
}

}  // namespace scorecard
