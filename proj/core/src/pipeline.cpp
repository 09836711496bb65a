#include "stylecast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stylecast/catalog_io.hpp"
#include "stylecast/fs_util.hpp"
#include "stylecast/model_io.hpp"
#include "stylecast/search.hpp"
#include "stylecast/synthgen.hpp"

namespace stylecast {

namespace fs = std::filesystem;

PreparedData prepare_data(const SplitResult& split, const FeatureConfig& config) {
  config.validate();
  PreparedData out;
  const Catalog* parts[] = {&split.train, &split.valid, &split.test};
  const Assortment assortment = Assortment::from_catalogs(parts, config);
  out.stats = FeatureStats::fit(split.train, assortment);

  const auto train_types = split.train.article_types();
  for (const Catalog* part : {&split.valid, &split.test}) {
    for (const auto& type : part->article_types()) {
      if (!std::binary_search(train_types.begin(), train_types.end(), type)) {
        out.warnings.push_back("article type '" + type +
                               "' has no training items and is skipped");
      }
    }
  }
  for (const auto& type : train_types) {
    auto of_type = [&type](const ItemMeta& item) { return item.article_type == type; };
    ArticleData data;
    data.article_type = type;
    const Catalog train = split.train.filter(of_type);
    data.encoder = fit_encoder(train.items(), config);
    data.train = build_matrix(train, assortment, data.encoder, out.stats, config, &out.warnings);
    data.valid = build_matrix(split.valid.filter(of_type), assortment, data.encoder, out.stats,
                              config, &out.warnings);
    data.test = build_matrix(split.test.filter(of_type), assortment, data.encoder, out.stats,
                             config, &out.warnings);
    out.articles.push_back(std::move(data));
  }
  return out;
}

TrainedModel train_run(const ArticleData& data, const RunSpec& run, const RunConfig& config,
                       Warnings* warnings) {
  if (data.train.empty()) {
    throw ValidationError("article type '" + data.article_type + "' has no training rows");
  }
  if (run.model == ModelKind::kNaive) return fit_naive(data.train);
  if (config.search_budget > 0) {
    if (!data.valid.empty()) {
      return search_hyperparams(data.train, data.valid, run.model, run.loss,
                                config.search_budget, config.seed)
          .best_model;
    }
    if (warnings) {
      warnings->push_back("article type '" + data.article_type +
                          "': no validation rows, using the fixed configuration");
    }
  }
  if (run.model == ModelKind::kGbrt) return fit_gbrt(data.train, run.loss, config.gbrt);
  if (run.loss.kind != LossKind::kMse) {
    throw ValidationError("random forest supports the mse loss only");
  }
  return fit_rf(data.train, run.loss.scale, config.rf);
}

namespace {

void sort_reports(std::vector<EvalReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const EvalReport& a, const EvalReport& b) {
    if (!a.wmape_item_week) return false;
    if (!b.wmape_item_week) return true;
    return *a.wmape_item_week < *b.wmape_item_week;
  });
}

}  // namespace

BenchmarkResult run_benchmark(const RunConfig& config, const Catalog& catalog) {
  config.validate();
  BenchmarkResult result;
  SplitResult split = run_stage("split", [&] { return split_by_go_live(catalog, config.split); });
  result.warnings = split.warnings;
  PreparedData prepared =
      run_stage("featurize", [&] { return prepare_data(split, config.features); });
  result.warnings.insert(result.warnings.end(), prepared.warnings.begin(),
                         prepared.warnings.end());

  std::vector<RunSpec> runs = {RunSpec{ModelKind::kNaive, LossSpec{}}};
  runs.insert(runs.end(), config.runs.begin(), config.runs.end());

  for (const auto& data : prepared.articles) {
    ArticleResult article;
    article.article_type = data.article_type;
    for (const auto& run : runs) {
      const std::string label = run.model == ModelKind::kNaive ? "naive" : run.label();
      const std::string stage = "train " + data.article_type + "/" + label;
      TrainedModel model = run_stage(stage, [&] { return train_run(data, run, config, &result.warnings); });
      article.reports.push_back(
          run_stage("evaluate " + data.article_type + "/" + label,
                    [&] { return evaluate(model, data.test); }));
      article.models.emplace_back(label, std::move(model));
    }
    sort_reports(article.reports);
    result.articles.push_back(std::move(article));
  }
  return result;
}

Catalog load_or_generate(const RunConfig& config) {
  if (config.data_dir.empty()) return run_stage("generate", [&] { return generate(config.gen); });
  return run_stage("ingest", [&] { return ingest_csv(config.data_dir); });
}

void write_benchmark(const fs::path& out_dir, const BenchmarkResult& result) {
  std::vector<fs::path> written;
  std::vector<fs::path> created;
  auto make_dir = [&](const fs::path& dir) {
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) created.push_back(p);
    fs::create_directories(dir);
  };
  try {
    for (const auto& article : result.articles) {
      make_dir(out_dir / "reports");
      const fs::path report = out_dir / "reports" / (article.article_type + ".csv");
      write_file_atomic(report, report_csv(article.reports));
      written.push_back(report);
      const fs::path model_dir = out_dir / "models" / article.article_type;
      make_dir(model_dir);
      for (const auto& [label, model] : article.models) {
        const fs::path path = model_dir / (label + ".model");
        save_model(path, model);
        written.push_back(path);
      }
    }
  } catch (const std::exception& e) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    // `created` lists deeper directories first within each chain.
    std::sort(created.begin(), created.end(), [](const fs::path& a, const fs::path& b) {
      return a.string().size() > b.string().size();
    });
    for (const auto& p : created) fs::remove(p, ec);  // only removes empty directories
    throw Error(std::string("stage 'write': ") + e.what());
  }
}

std::vector<std::size_t> probe_columns(const std::vector<std::string>& schema,
                                       const std::string& feature) {
  std::vector<std::size_t> cols;
  const std::string lag_prefix = feature + "_lag";
  for (std::size_t c = 0; c < schema.size(); ++c) {
    const auto& name = schema[c];
    if (name == feature) {
      cols.push_back(c);
    } else if (name.size() > lag_prefix.size() && name.starts_with(lag_prefix) &&
               std::all_of(name.begin() + lag_prefix.size(), name.end(),
                           [](char ch) { return ch >= '0' && ch <= '9'; })) {
      cols.push_back(c);
    }
  }
  if (std::find(schema.begin(), schema.end(), feature) == schema.end()) {
    throw ValidationError("unknown feature '" + feature + "'");
  }
  return cols;
}

std::vector<SensitivityPoint> sensitivity_probe(const TrainedModel& model,
                                                const FeatureMatrix& data,
                                                const std::string& feature,
                                                std::span<const double> grid) {
  const auto cols = probe_columns(data.columns(), feature);
  if (data.empty()) throw ValidationError("sensitivity probe needs at least one row");
  FeatureMatrix probe = data;
  std::vector<SensitivityPoint> curve;
  for (double value : grid) {
    if (!std::isfinite(value)) throw ValidationError("grid values must be finite");
    for (std::size_t r = 0; r < probe.rows(); ++r) {
      for (auto c : cols) probe.at(r, c) = value;
    }
    const auto forecast = predict(model, probe);
    const double mean =
        std::accumulate(forecast.begin(), forecast.end(), 0.0) / static_cast<double>(forecast.size());
    curve.push_back({value, mean});
  }
  return curve;
}

std::vector<double> default_grid(const FeatureMatrix& data, const std::string& feature, int n) {
  if (n < 2) throw ValidationError("grid needs at least two points");
  const auto col = probe_columns(data.columns(), feature).front();
  if (data.empty()) throw ValidationError("cannot derive a grid from an empty matrix");
  std::vector<double> values(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) values[r] = data.at(r, col);
  std::sort(values.begin(), values.end());
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) {
    const double q = 0.05 + 0.9 * i / (n - 1);
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, values.size() - 1);
    grid.push_back(values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]));
  }
  return grid;
}

std::string sensitivity_csv(const std::string& feature, std::span<const SensitivityPoint> curve) {
  std::string out = feature + ",mean_forecast\n";
  for (const auto& p : curve) out += format_double(p.value) + "," + format_double(p.mean_forecast) + "\n";
  return out;
}

std::vector<ForecastRow> forecast_new_items(const TrainedModel& model,
                                            std::span<const ItemMeta> items, int horizon,
                                            const AttributeEncoder& encoder,
                                            const FeatureStats& stats,
                                            const FeatureConfig& config,
                                            const ColdStartAssumptions& assumptions) {
  if (horizon < 1) throw ValidationError("forecast horizon must be >= 1");
  const FeatureMatrix matrix =
      build_cold_start_matrix(items, horizon, encoder, stats, config, assumptions);
  const auto forecast = predict(model, matrix);
  std::vector<ForecastRow> rows;
  rows.reserve(forecast.size());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    rows.push_back({matrix.keys()[r].item_id, matrix.keys()[r].week, forecast[r]});
  }
  return rows;
}

std::string forecast_csv(std::span<const ForecastRow> rows) {
  std::string out = "item_id,week,forecast_units\n";
  for (const auto& r : rows) {
    out += r.item_id + "," + std::to_string(r.week) + "," + format_double(r.units) + "\n";
  }
  return out;
}

}  // namespace stylecast
