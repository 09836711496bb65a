#pragma once

#include <string>
#include <vector>

#include "stylecast/feature_matrix.hpp"
#include "stylecast/losses.hpp"
#include "stylecast/tree.hpp"

namespace stylecast {

enum class ModelKind { kNaive, kRandomForest, kGbrt };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

/// A fitted model with everything needed to replay predictions.
struct TrainedModel {
  ModelKind kind = ModelKind::kNaive;
  std::vector<Tree> trees;
  double base_score = 0.0;
  LossSpec loss;
  std::vector<std::string> schema;
  EnsembleConfig config;

  bool operator==(const TrainedModel&) const = default;
};

/// Constant model: the mean of units_sold over all training rows.
TrainedModel fit_naive(const FeatureMatrix& train);

/// Newton-boosted regression trees. `loss_trace`, when given, receives the
/// full-batch training loss (on the transformed target) after every round.
TrainedModel fit_gbrt(const FeatureMatrix& train, const LossSpec& loss,
                      const EnsembleConfig& config, std::vector<double>* loss_trace = nullptr);

/// Random forest with the MSE criterion on `scale`.
TrainedModel fit_rf(const FeatureMatrix& train, TargetScale scale, const EnsembleConfig& config);

/// Raw ensemble score per row (before the inverse target transform).
std::vector<double> predict_raw(const TrainedModel& model, const FeatureMatrix& data);

/// Non-negative forecasts in units. Throws ValidationError when the data's
/// columns differ from the model schema in name or order.
std::vector<double> predict(const TrainedModel& model, const FeatureMatrix& data);

}  // namespace stylecast
