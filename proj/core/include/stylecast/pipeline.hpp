#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stylecast/config.hpp"
#include "stylecast/error.hpp"
#include "stylecast/metrics.hpp"
#include "stylecast/split.hpp"

namespace stylecast {

/// Runs `f`, prefixing any failure with the stage name. The error category
/// (validation vs internal) is preserved.
template <typename F>
decltype(auto) run_stage(std::string_view stage, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError("stage '" + std::string(stage) + "': " + e.what());
  } catch (const UndefinedMetric& e) {
    throw UndefinedMetric("stage '" + std::string(stage) + "': " + e.what());
  } catch (const std::exception& e) {
    throw Error("stage '" + std::string(stage) + "': " + e.what());
  }
}

/// Design matrices of one article type.
struct ArticleData {
  std::string article_type;
  AttributeEncoder encoder;
  FeatureMatrix train;
  FeatureMatrix valid;
  FeatureMatrix test;
};

struct PreparedData {
  FeatureStats stats;
  std::vector<ArticleData> articles;  // sorted by article type
  Warnings warnings;
};

/// Featurizes the three partitions. Encoders and statistics come from the
/// training partition only; cannibalization counts see the union of all
/// partitions' live flags. Article types without training items are skipped
/// with a warning.
PreparedData prepare_data(const SplitResult& split, const FeatureConfig& config);

/// Fits one run: a random search over `config.search_budget` draws when the
/// budget is positive and validation rows exist, otherwise the fixed
/// gbrt.* / rf.* configuration.
TrainedModel train_run(const ArticleData& data, const RunSpec& run, const RunConfig& config,
                       Warnings* warnings = nullptr);

struct ArticleResult {
  std::string article_type;
  std::vector<EvalReport> reports;  // sorted by item-week wMAPE, nulls last
  std::vector<std::pair<std::string, TrainedModel>> models;  // label -> model
};

struct BenchmarkResult {
  std::vector<ArticleResult> articles;
  Warnings warnings;
};

/// Trains every requested run plus the naive baseline per article type and
/// scores each on the test partition.
BenchmarkResult run_benchmark(const RunConfig& config, const Catalog& catalog);

/// Loads `config.data_dir`, or generates the synthetic catalog when empty.
Catalog load_or_generate(const RunConfig& config);

/// Writes reports/<article_type>.csv and models/<article_type>/<label>.model.
/// On failure every file written so far is removed.
void write_benchmark(const std::filesystem::path& out_dir, const BenchmarkResult& result);

struct SensitivityPoint {
  double value = 0.0;
  double mean_forecast = 0.0;
};

/// Columns overwritten for `feature`: the column itself and its
/// `<feature>_lag<k>` copies. Throws ValidationError for unknown features.
std::vector<std::size_t> probe_columns(const std::vector<std::string>& schema,
                                       const std::string& feature);

/// Mean forecast over all rows of `data` with the feature (and its lags)
/// set to each grid value in turn.
std::vector<SensitivityPoint> sensitivity_probe(const TrainedModel& model,
                                                const FeatureMatrix& data,
                                                const std::string& feature,
                                                std::span<const double> grid);

/// `n` evenly spaced quantiles (5% to 95%) of the feature's column.
std::vector<double> default_grid(const FeatureMatrix& data, const std::string& feature,
                                 int n = 5);

std::string sensitivity_csv(const std::string& feature, std::span<const SensitivityPoint> curve);

struct ForecastRow {
  std::string item_id;
  Week week = 0;
  double units = 0.0;
};

/// Week-by-week forecasts for items without sales history, using the
/// cold-start defaults in `assumptions`.
std::vector<ForecastRow> forecast_new_items(const TrainedModel& model,
                                            std::span<const ItemMeta> items, int horizon,
                                            const AttributeEncoder& encoder,
                                            const FeatureStats& stats,
                                            const FeatureConfig& config,
                                            const ColdStartAssumptions& assumptions);

std::string forecast_csv(std::span<const ForecastRow> rows);

}  // namespace stylecast
