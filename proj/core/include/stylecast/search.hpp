#pragma once

#include <cstdint>
#include <vector>

#include "stylecast/ensemble.hpp"

namespace stylecast {

/// Documented sampling ranges for the random search.
struct SearchSpace {
  int min_trees = 50, max_trees = 500;
  int min_depth = 3, max_depth = 8;
  double min_learning_rate = 0.01, max_learning_rate = 0.3;  // log-uniform
  int min_leaf = 5, max_leaf = 100;
  double min_subsample = 0.6, max_subsample = 1.0;
};

inline constexpr int kDefaultSearchBudget = 30;

struct SearchTrial {
  EnsembleConfig config;
  double valid_wmape = 0.0;  // item-week wMAPE on the validation matrix
};

struct SearchResult {
  EnsembleConfig best_config;
  TrainedModel best_model;
  std::vector<SearchTrial> trials;  // in sampling order
};

/// Draws one configuration from `space`.
EnsembleConfig sample_config(const SearchSpace& space, const EnsembleConfig& fixed,
                             std::mt19937_64& rng);

/// Seeded random search: samples `budget` configurations, fits each (GBRT for
/// `kind == kGbrt`, random forest for kRandomForest) on `train`, and keeps the
/// one with the lowest validation item-week wMAPE. Ties go to the first
/// sampled. Throws ValidationError for an empty validation matrix, and
/// UndefinedMetric when the validation actuals sum to zero.
SearchResult search_hyperparams(const FeatureMatrix& train, const FeatureMatrix& valid,
                                ModelKind kind, const LossSpec& loss, int budget,
                                std::uint64_t seed, const SearchSpace& space = {});

}  // namespace stylecast
