#include "stylecast/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stylecast/error.hpp"

namespace stylecast {

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("tree must have at least one node");
  for (const auto& node : nodes_) {
    if (node.is_leaf()) {
      if (!std::isfinite(node.value)) throw ValidationError("non-finite leaf value");
      continue;
    }
    const int n = static_cast<int>(nodes_.size());
    if (node.left <= 0 || node.right <= 0 || node.left >= n || node.right >= n) {
      throw ValidationError("tree node has an invalid child index");
    }
    if (!std::isfinite(node.threshold)) throw ValidationError("non-finite split threshold");
  }
}

double Tree::predict(std::span<const double> row) const {
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf()) {
    node = &nodes_[static_cast<std::size_t>(
        row[static_cast<std::size_t>(node->feature)] < node->threshold ? node->left : node->right)];
  }
  return node->value;
}

int Tree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    best = std::max(best, d[i]);
    if (node.is_leaf()) continue;
    d[static_cast<std::size_t>(node.left)] = d[i] + 1;
    d[static_cast<std::size_t>(node.right)] = d[i] + 1;
  }
  return best;
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

void Tree::scale_leaves(double factor) {
  for (auto& node : nodes_) {
    if (node.is_leaf()) node.value *= factor;
  }
}

EnsembleConfig EnsembleConfig::random_forest_defaults() {
  EnsembleConfig c;
  c.n_trees = 100;
  c.max_depth = 12;
  c.min_samples_leaf = 5;
  c.learning_rate = 1.0;
  c.subsample_rows = 1.0;
  c.subsample_cols = 0.5;
  c.l2_leaf = 0.0;
  c.bootstrap = true;
  return c;
}

void EnsembleConfig::validate() const {
  if (n_trees < 1) throw ValidationError("n_trees must be >= 1");
  if (max_depth < 1) throw ValidationError("max_depth must be >= 1");
  if (min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ValidationError("learning_rate must be in (0, 1]");
  }
  if (!(subsample_rows > 0.0 && subsample_rows <= 1.0)) {
    throw ValidationError("subsample_rows must be in (0, 1]");
  }
  if (!(subsample_cols > 0.0 && subsample_cols <= 1.0)) {
    throw ValidationError("subsample_cols must be in (0, 1]");
  }
  if (!(l2_leaf >= 0.0 && std::isfinite(l2_leaf))) throw ValidationError("l2_leaf must be >= 0");
}

SortedColumns::SortedColumns(const FeatureMatrix& matrix)
    : rows_(matrix.rows()), cols_(matrix.cols()) {
  if (rows_ > std::numeric_limits<std::uint32_t>::max()) throw Error("too many rows");
  values_.resize(rows_ * cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) values_[c * rows_ + r] = matrix.at(r, c);
  }
  order_.resize(rows_ * cols_);
  sorted_values_.resize(rows_ * cols_);
  for (std::size_t c = 0; c < cols_; ++c) {
    auto ord = std::span<std::uint32_t>(order_).subspan(c * rows_, rows_);
    std::iota(ord.begin(), ord.end(), std::uint32_t{0});
    const double* col = values_.data() + c * rows_;
    std::stable_sort(ord.begin(), ord.end(),
                     [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    for (std::size_t j = 0; j < rows_; ++j) sorted_values_[c * rows_ + j] = col[ord[j]];
  }
}

double split_gain(double g_left, double h_left, double g_total, double h_total, double l2) {
  const double g_right = g_total - g_left;
  const double h_right = h_total - h_left;
  return 0.5 * (g_left * g_left / (h_left + l2) + g_right * g_right / (h_right + l2) -
                g_total * g_total / (h_total + l2));
}

namespace {

struct OpenNode {
  std::size_t tree_index = 0;
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

struct Candidate {
  double gain = -std::numeric_limits<double>::infinity();
  int feature = -1;
  double threshold = 0.0;
};

struct ScanState {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
  double last = 0.0;
  bool seen = false;
};

double midpoint(double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  return mid > lo ? mid : hi;
}

std::vector<std::size_t> sample_columns(std::size_t cols, double fraction, std::mt19937_64& rng) {
  std::vector<std::size_t> all(cols);
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(cols)));
  k = std::clamp<std::size_t>(k, std::min<std::size_t>(1, cols), cols);
  if (k < cols) {
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, cols - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
  }
  return all;
}

}  // namespace

Tree fit_tree(const SortedColumns& data, std::span<const double> gradient,
              std::span<const double> curvature, std::span<const std::uint32_t> multiplicity,
              const EnsembleConfig& config, std::mt19937_64& rng) {
  const std::size_t n = data.rows();
  if (gradient.size() != n || curvature.size() != n || multiplicity.size() != n) {
    throw Error("gradient, curvature and multiplicity must match the row count");
  }
  const double l2 = config.l2_leaf;
  const std::size_t min_leaf = static_cast<std::size_t>(config.min_samples_leaf);
  const std::vector<std::size_t> columns = sample_columns(data.cols(), config.subsample_cols, rng);

  std::vector<double> wg(n), wh(n);
  std::vector<int> node_of_row(n, -1);
  OpenNode root;
  for (std::size_t r = 0; r < n; ++r) {
    if (multiplicity[r] == 0) continue;
    wg[r] = multiplicity[r] * gradient[r];
    wh[r] = multiplicity[r] * curvature[r];
    root.g += wg[r];
    root.h += wh[r];
    ++root.count;
    node_of_row[r] = 0;
  }

  std::vector<TreeNode> nodes(1);
  std::vector<OpenNode> open = {root};
  const auto make_leaf = [&](const OpenNode& node) {
    nodes[node.tree_index].value = node.count == 0 ? 0.0 : -node.g / (node.h + l2);
  };

  for (int depth = 0; !open.empty(); ++depth) {
    if (depth >= config.max_depth) {
      for (const auto& node : open) make_leaf(node);
      break;
    }
    std::vector<Candidate> best(open.size());
    std::vector<ScanState> state(open.size());
    for (std::size_t c : columns) {
      std::fill(state.begin(), state.end(), ScanState{});
      auto order = data.order(c);
      auto values = data.sorted_values(c);
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t r = order[j];
        const int k = node_of_row[r];
        if (k < 0) continue;
        ScanState& s = state[static_cast<std::size_t>(k)];
        const double x = values[j];
        if (s.seen && x > s.last) {
          const OpenNode& node = open[static_cast<std::size_t>(k)];
          if (s.count >= min_leaf && node.count - s.count >= min_leaf) {
            const double gain = split_gain(s.g, s.h, node.g, node.h, l2);
            Candidate& b = best[static_cast<std::size_t>(k)];
            if (gain > b.gain) b = {gain, static_cast<int>(c), midpoint(s.last, x)};
          }
        }
        s.g += wg[r];
        s.h += wh[r];
        ++s.count;
        s.last = x;
        s.seen = true;
      }
    }

    // Materialize accepted splits; everything else becomes a leaf.
    std::vector<int> remap(open.size(), -1);
    std::vector<OpenNode> next;
    for (std::size_t k = 0; k < open.size(); ++k) {
      const OpenNode& node = open[k];
      const Candidate& b = best[k];
      const double parent_score = node.g * node.g / (node.h + l2);
      if (b.feature < 0 || !(b.gain > kMinRelativeGain * parent_score)) {
        make_leaf(node);
        continue;
      }
      TreeNode& split = nodes[node.tree_index];
      split.feature = b.feature;
      split.threshold = b.threshold;
      split.left = static_cast<int>(nodes.size());
      split.right = static_cast<int>(nodes.size() + 1);
      remap[k] = static_cast<int>(next.size());
      next.push_back({static_cast<std::size_t>(split.left), 0.0, 0.0, 0});
      next.push_back({static_cast<std::size_t>(split.right), 0.0, 0.0, 0});
      nodes.emplace_back();
      nodes.emplace_back();
    }
    for (std::size_t r = 0; r < n; ++r) {
      const int k = node_of_row[r];
      if (k < 0) continue;
      const int base = remap[static_cast<std::size_t>(k)];
      if (base < 0) {
        node_of_row[r] = -1;
        continue;
      }
      const TreeNode& split = nodes[open[static_cast<std::size_t>(k)].tree_index];
      const bool left = data.value(r, static_cast<std::size_t>(split.feature)) < split.threshold;
      const int child = base + (left ? 0 : 1);
      node_of_row[r] = child;
      OpenNode& c = next[static_cast<std::size_t>(child)];
      c.g += wg[r];
      c.h += wh[r];
      ++c.count;
    }
    open = std::move(next);
  }
  return Tree(std::move(nodes));
}

Tree fit_tree(const FeatureMatrix& matrix, std::span<const double> gradient,
              std::span<const double> curvature, const EnsembleConfig& config,
              std::mt19937_64& rng) {
  SortedColumns data(matrix);
  std::vector<std::uint32_t> ones(matrix.rows(), 1);
  return fit_tree(data, gradient, curvature, ones, config, rng);
}

}  // namespace stylecast
