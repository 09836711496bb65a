#include "stylecast/search.hpp"

#include <cmath>

#include "stylecast/error.hpp"
#include "stylecast/metrics.hpp"

namespace stylecast {

EnsembleConfig sample_config(const SearchSpace& space, const EnsembleConfig& fixed,
                             std::mt19937_64& rng) {
  EnsembleConfig c = fixed;
  c.n_trees = std::uniform_int_distribution<int>(space.min_trees, space.max_trees)(rng);
  c.max_depth = std::uniform_int_distribution<int>(space.min_depth, space.max_depth)(rng);
  const double log_lr = std::uniform_real_distribution<double>(
      std::log(space.min_learning_rate), std::log(space.max_learning_rate))(rng);
  c.learning_rate = std::exp(log_lr);
  c.min_samples_leaf = std::uniform_int_distribution<int>(space.min_leaf, space.max_leaf)(rng);
  std::uniform_real_distribution<double> sub(space.min_subsample, space.max_subsample);
  c.subsample_rows = sub(rng);
  c.subsample_cols = sub(rng);
  c.seed = rng();
  return c;
}

SearchResult search_hyperparams(const FeatureMatrix& train, const FeatureMatrix& valid,
                                ModelKind kind, const LossSpec& loss, int budget,
                                std::uint64_t seed, const SearchSpace& space) {
  if (budget < 1) throw ValidationError("search budget must be >= 1");
  if (valid.empty()) throw ValidationError("validation matrix is empty");
  if (kind == ModelKind::kNaive) throw ValidationError("the naive model has no hyperparameters");
  if (kind == ModelKind::kRandomForest && loss.kind != LossKind::kMse) {
    throw ValidationError("random forest supports the mse criterion only");
  }
  loss.validate();

  std::mt19937_64 rng(seed);
  const EnsembleConfig base =
      kind == ModelKind::kGbrt ? EnsembleConfig{} : EnsembleConfig::random_forest_defaults();
  SearchResult result;
  double best = 0.0;
  for (int i = 0; i < budget; ++i) {
    EnsembleConfig config = sample_config(space, base, rng);
    if (kind == ModelKind::kRandomForest) config.learning_rate = 1.0;
    TrainedModel model =
        kind == ModelKind::kGbrt ? fit_gbrt(train, loss, config) : fit_rf(train, loss.scale, config);
    const std::vector<double> forecast = predict(model, valid);
    const double score = wmape(valid.keys(), valid.target(), forecast, AggregationLevel::kItemWeek);
    result.trials.push_back({config, score});
    if (i == 0 || score < best) {
      best = score;
      result.best_config = config;
      result.best_model = std::move(model);
    }
  }
  return result;
}

}  // namespace stylecast
