#include "stylecast/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stylecast/error.hpp"

namespace stylecast {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kNaive: return "naive";
    case ModelKind::kRandomForest: return "rf";
    case ModelKind::kGbrt: return "gbrt";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "naive") return ModelKind::kNaive;
  if (text == "rf") return ModelKind::kRandomForest;
  if (text == "gbrt") return ModelKind::kGbrt;
  throw ValidationError("unknown model kind '" + std::string(text) + "' (expected naive|rf|gbrt)");
}

namespace {

constexpr double kPoissonMeanFloor = 1e-9;

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<double> transformed_target(const FeatureMatrix& data, const LossSpec& loss) {
  std::vector<double> y(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const double t = data.target()[r];
    if (loss.kind == LossKind::kPoisson && (t < 0.0 || t != std::floor(t))) {
      throw ValidationError("poisson loss needs non-negative integer targets");
    }
    y[r] = scale_forward(loss.scale, t);
  }
  return y;
}

double initial_score(const LossSpec& loss, std::span<const double> y) {
  switch (loss.kind) {
    case LossKind::kMse: return mean_of(y);
    case LossKind::kPoisson: return std::log(mean_of(y) + kPoissonMeanFloor);
    case LossKind::kHuber: return median_of({y.begin(), y.end()});
  }
  return 0.0;
}

void require_rows(const FeatureMatrix& train) {
  if (train.empty()) throw ValidationError("training matrix has no rows");
}

void check_schema(const TrainedModel& model, const FeatureMatrix& data) {
  if (data.columns() == model.schema) return;
  if (data.cols() != model.schema.size()) {
    throw ValidationError("schema mismatch: model expects " + std::to_string(model.schema.size()) +
                          " columns, data has " + std::to_string(data.cols()));
  }
  for (std::size_t c = 0; c < data.cols(); ++c) {
    if (data.columns()[c] != model.schema[c]) {
      throw ValidationError("schema mismatch at column " + std::to_string(c) + ": model expects '" +
                            model.schema[c] + "', data has '" + data.columns()[c] + "'");
    }
  }
}

}  // namespace

TrainedModel fit_naive(const FeatureMatrix& train) {
  require_rows(train);
  TrainedModel model;
  model.kind = ModelKind::kNaive;
  model.base_score = mean_of(train.target());
  model.loss = {LossKind::kMse, TargetScale::kLinear, std::nullopt};
  model.schema = train.columns();
  return model;
}

TrainedModel fit_gbrt(const FeatureMatrix& train_in, const LossSpec& loss,
                      const EnsembleConfig& config, std::vector<double>* loss_trace) {
  loss.validate();
  config.validate();
  require_rows(train_in);
  const FeatureMatrix train = train_in.canonical();
  const std::vector<double> y = transformed_target(train, loss);
  const std::size_t n = train.rows();

  TrainedModel model;
  model.kind = ModelKind::kGbrt;
  model.loss = loss;
  model.schema = train.columns();
  model.config = config;
  model.base_score = initial_score(loss, y);

  const SortedColumns sorted(train);
  std::mt19937_64 rng(config.seed);
  std::vector<double> score(n, model.base_score);
  std::vector<std::uint32_t> multiplicity(n, 1);
  std::vector<std::uint32_t> positions(n);
  const auto sample_size = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(config.subsample_rows * static_cast<double>(n))));
  if (loss_trace != nullptr) loss_trace->clear();

  for (int round = 0; round < config.n_trees; ++round) {
    GradHess gh = loss_grad_hess(loss, y, score);
    if (loss.kind == LossKind::kHuber) {
      // Unit curvature surrogate: the exact Huber curvature vanishes on the
      // linear branch, which would make outlier-only leaves explode.
      std::fill(gh.curvature.begin(), gh.curvature.end(), 1.0);
    }
    if (sample_size < n) {
      std::iota(positions.begin(), positions.end(), std::uint32_t{0});
      std::fill(multiplicity.begin(), multiplicity.end(), 0);
      for (std::size_t i = 0; i < sample_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(positions[i], positions[pick(rng)]);
        multiplicity[positions[i]] = 1;
      }
    }
    Tree tree = fit_tree(sorted, gh.gradient, gh.curvature, multiplicity, config, rng);
    tree.scale_leaves(config.learning_rate);
    for (std::size_t r = 0; r < n; ++r) score[r] += tree.predict(train.row(r));
    model.trees.push_back(std::move(tree));
    if (loss_trace != nullptr) loss_trace->push_back(loss_value(loss, y, score));
  }
  return model;
}

TrainedModel fit_rf(const FeatureMatrix& train_in, TargetScale scale, const EnsembleConfig& config) {
  config.validate();
  require_rows(train_in);
  const FeatureMatrix train = train_in.canonical();
  const LossSpec loss{LossKind::kMse, scale, std::nullopt};
  const std::vector<double> y = transformed_target(train, loss);
  const std::size_t n = train.rows();

  TrainedModel model;
  model.kind = ModelKind::kRandomForest;
  model.loss = loss;
  model.schema = train.columns();
  model.config = config;
  model.base_score = 0.0;

  const SortedColumns sorted(train);
  std::mt19937_64 rng(config.seed);
  // With g = -y and unit curvature a Newton leaf (l2 = 0) is the weighted
  // mean target of its rows.
  std::vector<double> gradient(n), curvature(n, 1.0);
  for (std::size_t r = 0; r < n; ++r) gradient[r] = -y[r];
  std::vector<std::uint32_t> multiplicity(n, 1);
  const auto sample_size = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(config.subsample_rows * static_cast<double>(n))));
  std::vector<std::uint32_t> positions(n);

  for (int t = 0; t < config.n_trees; ++t) {
    if (config.bootstrap) {
      std::fill(multiplicity.begin(), multiplicity.end(), 0);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t i = 0; i < sample_size; ++i) ++multiplicity[pick(rng)];
    } else if (sample_size < n) {
      std::iota(positions.begin(), positions.end(), std::uint32_t{0});
      std::fill(multiplicity.begin(), multiplicity.end(), 0);
      for (std::size_t i = 0; i < sample_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(positions[i], positions[pick(rng)]);
        multiplicity[positions[i]] = 1;
      }
    }
    model.trees.push_back(fit_tree(sorted, gradient, curvature, multiplicity, config, rng));
  }
  return model;
}

std::vector<double> predict_raw(const TrainedModel& model, const FeatureMatrix& data) {
  check_schema(model, data);
  std::vector<double> out(data.rows(), model.base_score);
  if (model.trees.empty()) return out;
  const bool average = model.kind == ModelKind::kRandomForest;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += tree.predict(row);
    out[r] += average ? sum / static_cast<double>(model.trees.size()) : sum;
  }
  return out;
}

std::vector<double> predict(const TrainedModel& model, const FeatureMatrix& data) {
  std::vector<double> out = predict_raw(model, data);
  for (double& v : out) v = prediction_from_score(model.loss, v);
  return out;
}

}  // namespace stylecast
