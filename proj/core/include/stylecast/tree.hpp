#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "stylecast/feature_matrix.hpp"

namespace stylecast {

/// Internal nodes send rows with `x[feature] < threshold` to `left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf raw-score increment

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Binary regression tree; node 0 is the root.
class Tree {
 public:
  Tree() : nodes_(1) {}
  explicit Tree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  double predict(std::span<const double> row) const;
  int depth() const;
  std::size_t leaf_count() const;
  void scale_leaves(double factor);

  bool operator==(const Tree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
};

struct EnsembleConfig {
  int n_trees = 200;
  int max_depth = 6;
  int min_samples_leaf = 20;
  double learning_rate = 0.1;
  double subsample_rows = 1.0;
  double subsample_cols = 0.8;
  double l2_leaf = 1.0;
  bool bootstrap = false;  // sample rows with replacement (random forest)
  std::uint64_t seed = 42;

  static EnsembleConfig random_forest_defaults();
  void validate() const;
  bool operator==(const EnsembleConfig&) const = default;
};

/// Gains at or below this fraction of the parent's structure score
/// G^2 / (H + lambda) are treated as no improvement.
inline constexpr double kMinRelativeGain = 1e-12;

/// Column-major copy of a matrix with every column's row order presorted by
/// (value, row index). Built once and reused across boosting rounds.
class SortedColumns {
 public:
  explicit SortedColumns(const FeatureMatrix& matrix);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  /// Row indices of column `c` in ascending value order.
  std::span<const std::uint32_t> order(std::size_t c) const {
    return std::span<const std::uint32_t>(order_).subspan(c * rows_, rows_);
  }
  /// Values of column `c` aligned with order(c).
  std::span<const double> sorted_values(std::size_t c) const {
    return std::span<const double>(sorted_values_).subspan(c * rows_, rows_);
  }
  double value(std::size_t row, std::size_t c) const { return values_[c * rows_ + row]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;  // column-major
  std::vector<std::uint32_t> order_;
  std::vector<double> sorted_values_;
};

/// Greedy Newton-step CART. Rows with multiplicity 0 are excluded; the
/// others contribute multiplicity * g and multiplicity * h. Candidate
/// thresholds are midpoints of consecutive distinct values inside a node.
/// Ties in gain go to the lowest column index, then the lowest threshold.
Tree fit_tree(const SortedColumns& data, std::span<const double> gradient,
              std::span<const double> curvature, std::span<const std::uint32_t> multiplicity,
              const EnsembleConfig& config, std::mt19937_64& rng);

/// Convenience overload: every row used once.
Tree fit_tree(const FeatureMatrix& matrix, std::span<const double> gradient,
              std::span<const double> curvature, const EnsembleConfig& config,
              std::mt19937_64& rng);

/// Split gain of a candidate partition.
double split_gain(double g_left, double h_left, double g_total, double h_total, double l2);

}  // namespace stylecast
