#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylecast/ensemble.hpp"
#include "stylecast/feature_matrix.hpp"

namespace stylecast {

enum class AggregationLevel { kItemWeek, kItem, kArticle };

/// Weighted MAPE: summed absolute error over summed actuals, after
/// aggregating actuals and forecasts to `level`. `keys` aligns both vectors;
/// ITEM groups by item_id, ARTICLE sums everything.
/// Throws UndefinedMetric when the actuals sum to zero.
double wmape(std::span<const RowKey> keys, std::span<const double> actual,
             std::span<const double> forecast, AggregationLevel level);

/// Plain mean absolute percentage error; undefined when any actual is 0.
double mape(std::span<const double> actual, std::span<const double> forecast);

/// Pearson correlation with population moments. Throws UndefinedMetric for
/// constant vectors or fewer than two points.
double pearson(std::span<const double> x, std::span<const double> y);

struct PairCounts {
  std::int64_t concordant = 0;     // P
  std::int64_t discordant = 0;     // Q
  std::int64_t ties_x_only = 0;    // T
  std::int64_t ties_y_only = 0;    // U
  std::int64_t ties_both = 0;

  bool operator==(const PairCounts&) const = default;
};

/// O(n log n) pair classification (Knight's merge-sort scheme).
PairCounts kendall_pair_counts(std::span<const double> x, std::span<const double> y);

/// tau-b = (P - Q) / sqrt((P + Q + T)(P + Q + U)).
double tau_b(const PairCounts& counts);

/// Kendall tau-b; throws UndefinedMetric on a zero denominator.
double kendall_tau(std::span<const double> x, std::span<const double> y);

struct EvalReport {
  std::string model;
  std::string loss;
  std::string scale;
  std::optional<double> wmape_item_week;
  std::optional<double> wmape_item;
  std::optional<double> wmape_article;
  std::optional<double> pearson_r;
  std::optional<double> kendall_tau;
  std::int64_t n_items = 0;
  std::int64_t n_rows = 0;

  bool operator==(const EvalReport&) const = default;
};

/// Labels used in reports for a model ("none"/"linear" loss labels for naive).
std::string report_loss_label(const TrainedModel& model);
std::string report_scale_label(const TrainedModel& model);

/// Scores `forecast` against data.target(). Pearson and Kendall are computed
/// on per-item totals. Undefined metrics become nullopt.
EvalReport evaluate_forecast(const FeatureMatrix& data, std::span<const double> forecast);

/// Predicts with `model` and scores the result.
EvalReport evaluate(const TrainedModel& model, const FeatureMatrix& data);

/// CSV with the header
/// model,loss,scale,wmape_item_week,wmape_item,wmape_article,pearson_r,kendall_tau,n_items,n_rows
/// Undefined metrics are written as "null".
std::string report_csv(std::span<const EvalReport> reports);
std::vector<EvalReport> parse_report_csv(const std::string& text);

}  // namespace stylecast
