#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stylecast/catalog_io.hpp"
#include "stylecast/config.hpp"
#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"
#include "stylecast/matrix_io.hpp"
#include "stylecast/model_io.hpp"
#include "stylecast/pipeline.hpp"
#include "stylecast/search.hpp"
#include "stylecast/synthgen.hpp"

namespace fs = std::filesystem;
using namespace stylecast;

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool quiet = false;
};

class Console {
 public:
  explicit Console(bool quiet) : quiet_(quiet) {}
  void info(const std::string& line) const {
    if (!quiet_) std::cout << line << '\n';
  }
  void warn(const Warnings& warnings) const {
    if (quiet_) return;
    for (const auto& w : warnings) std::cerr << "stylecast: warning: " << w << '\n';
  }

 private:
  bool quiet_;
};

RunConfig load_config(const Globals& g) {
  KeyValueConfig kv;
  if (!g.config_path.empty()) kv = KeyValueConfig::load(g.config_path);
  RunConfig config = RunConfig::from(kv);
  if (g.seed) config.reseed(*g.seed);
  return config;
}

fs::path require_out_dir(const Globals& g) {
  if (g.out_dir.empty()) throw ValidationError("--out-dir is required");
  return g.out_dir;
}

void require_distinct(const fs::path& a, const fs::path& b) {
  if (fs::weakly_canonical(a) == fs::weakly_canonical(b)) {
    throw ValidationError("input and output paths must differ: " + a.string());
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  for (auto field : split_fields(text, ',')) grid.push_back(parse_double(trim(field), "grid"));
  if (grid.empty()) throw ValidationError("--grid is empty");
  return grid;
}

void print_summary(const Console& out, const Catalog& catalog) {
  const CatalogSummary s = describe(catalog);
  out.info("items " + std::to_string(catalog.size()) + ", live rows " + std::to_string(s.n_rows));
  out.info("skewness " + format_double(s.skewness) + ", log skewness " +
           format_double(s.log_skewness));
}

// Splits a catalog directory, or reuses the partitions written by `split`.
SplitResult load_split(const fs::path& dir, const RunConfig& config) {
  if (fs::exists(dir / "train") && fs::exists(dir / "valid") && fs::exists(dir / "test")) {
    SplitResult split;
    split.train = ingest_csv(dir / "train");
    split.valid = ingest_csv(dir / "valid");
    split.test = ingest_csv(dir / "test");
    return split;
  }
  return split_by_go_live(ingest_csv(dir), config.split);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stylecast: demand forecasting for new retail items"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "flat key = value configuration file");
  app.add_option("--seed", g.seed, "master seed (overrides the config)");
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_flag("--quiet", g.quiet, "suppress progress output and warnings");

  std::string data, train_dir, valid_dir, model_path, out_path, items_path, promos_path, feature,
      grid_text, trace_path, trials_path, model_kind, loss_name, scale_name, test_dir;
  int horizon = 0;
  int budget = kDefaultSearchBudget;

  auto* generate_cmd = app.add_subcommand("generate", "write a synthetic catalog to --out-dir");

  auto* ingest_cmd = app.add_subcommand("ingest", "validate a catalog directory");
  ingest_cmd->add_option("--data", data, "catalog directory")->required();

  auto* split_cmd = app.add_subcommand("split", "partition a catalog by go-live week");
  split_cmd->add_option("--data", data, "catalog directory")->required();

  auto* featurize_cmd = app.add_subcommand("featurize", "build per-article-type design matrices");
  auto* featurize_data =
      featurize_cmd->add_option("--data", data, "catalog directory or output of split");
  auto* featurize_train = featurize_cmd->add_option("--train", train_dir, "training catalog");
  auto* featurize_valid = featurize_cmd->add_option("--valid", valid_dir, "validation catalog");
  auto* featurize_test = featurize_cmd->add_option("--test", test_dir, "test catalog");
  featurize_train->needs(featurize_valid, featurize_test)->excludes(featurize_data);
  featurize_valid->needs(featurize_train);
  featurize_test->needs(featurize_train);
  featurize_cmd->add_option("--out", out_path, "output directory (default: --out-dir)");

  auto* train_cmd = app.add_subcommand("train", "fit one model");
  train_cmd->add_option("--train", train_dir, "training matrix directory")->required();
  train_cmd->add_option("--valid", valid_dir, "validation matrix directory (for search)");
  train_cmd->add_option("--out", model_path, "model file")->required();
  train_cmd->add_option("--model", model_kind, "naive | rf | gbrt");
  train_cmd->add_option("--loss", loss_name, "mse | poisson | huber");
  train_cmd->add_option("--scale", scale_name, "linear | log");
  train_cmd->add_option("--trace", trace_path, "per-round training loss CSV (gbrt)");

  auto* search_cmd = app.add_subcommand("search", "random hyperparameter search");
  search_cmd->add_option("--train", train_dir, "training matrix directory")->required();
  search_cmd->add_option("--valid", valid_dir, "validation matrix directory")->required();
  search_cmd->add_option("--out", model_path, "model file for the best configuration")->required();
  search_cmd->add_option("--model", model_kind, "rf | gbrt");
  search_cmd->add_option("--loss", loss_name, "mse | poisson | huber");
  search_cmd->add_option("--scale", scale_name, "linear | log");
  search_cmd->add_option("--budget", budget, "number of sampled configurations");
  search_cmd->add_option("--trials", trials_path, "CSV of every trial");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "score a model on a matrix");
  evaluate_cmd->add_option("--model", model_path, "model file")->required();
  evaluate_cmd->add_option("--data", data, "matrix directory")->required();
  evaluate_cmd->add_option("--out", out_path, "report CSV")->required();

  auto* forecast_cmd = app.add_subcommand("forecast", "forecast items without sales history");
  forecast_cmd->add_option("--model", model_path, "model file")->required();
  forecast_cmd->add_option("--data", data, "training catalog or output of split")->required();
  forecast_cmd->add_option("--items", items_path, "items CSV of the new styles")->required();
  forecast_cmd->add_option("--horizon", horizon, "weeks to forecast")->required();
  forecast_cmd->add_option("--promos", promos_path, "future promo calendar");
  forecast_cmd->add_option("--out", out_path, "forecast CSV")->required();

  auto* sensitivity_cmd = app.add_subcommand("sensitivity", "mean forecast over a feature grid");
  sensitivity_cmd->add_option("--model", model_path, "model file")->required();
  sensitivity_cmd->add_option("--data", data, "matrix directory")->required();
  sensitivity_cmd->add_option("--feature", feature, "column name")->required();
  sensitivity_cmd->add_option("--grid", grid_text, "comma-separated values (default: quantiles)");
  sensitivity_cmd->add_option("--out", out_path, "curve CSV")->required();

  auto* benchmark_cmd = app.add_subcommand("benchmark", "train and score every configured run");
  benchmark_cmd->add_option("--data", data, "catalog directory (default: generate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const Console out(g.quiet);
  try {
    RunConfig config = load_config(g);

    if (generate_cmd->parsed()) {
      const fs::path dir = require_out_dir(g);
      const Catalog catalog = generate(config.gen);
      write_catalog(dir, catalog);
      print_summary(out, catalog);
    } else if (ingest_cmd->parsed()) {
      const Catalog catalog = ingest_csv(data);
      print_summary(out, catalog);
      if (!g.out_dir.empty()) {
        require_distinct(data, g.out_dir);
        write_catalog(g.out_dir, catalog);
      }
    } else if (split_cmd->parsed()) {
      const fs::path dir = require_out_dir(g);
      require_distinct(data, dir);
      const SplitResult split = split_by_go_live(ingest_csv(data), config.split);
      out.warn(split.warnings);
      write_catalog(dir / "train", split.train);
      write_catalog(dir / "valid", split.valid);
      write_catalog(dir / "test", split.test);
      out.info("train " + std::to_string(split.train.size()) + ", valid " +
               std::to_string(split.valid.size()) + ", test " +
               std::to_string(split.test.size()) + " items");
    } else if (featurize_cmd->parsed()) {
      const fs::path dir = out_path.empty() ? require_out_dir(g) : fs::path(out_path);
      SplitResult split;
      if (!train_dir.empty()) {
        for (const auto& in : {train_dir, valid_dir, test_dir}) require_distinct(in, dir);
        split.train = ingest_csv(train_dir);
        split.valid = ingest_csv(valid_dir);
        split.test = ingest_csv(test_dir);
      } else {
        if (data.empty()) throw ValidationError("featurize needs --data or --train/--valid/--test");
        require_distinct(data, dir);
        split = load_split(data, config);
      }
      const PreparedData prepared = prepare_data(split, config.features);
      out.warn(split.warnings);
      out.warn(prepared.warnings);
      for (const auto& a : prepared.articles) {
        write_matrix(dir / a.article_type / "train", a.train);
        write_matrix(dir / a.article_type / "valid", a.valid);
        write_matrix(dir / a.article_type / "test", a.test);
        out.info(a.article_type + ": " + std::to_string(a.train.rows()) + " train, " +
                 std::to_string(a.valid.rows()) + " valid, " + std::to_string(a.test.rows()) +
                 " test rows, " + std::to_string(a.train.cols()) + " columns");
      }
    } else if (train_cmd->parsed()) {
      const ModelKind kind = model_kind.empty() ? config.model : parse_model_kind(model_kind);
      LossSpec loss = config.loss;
      if (!loss_name.empty()) loss.kind = parse_loss_kind(loss_name);
      if (!scale_name.empty()) loss.scale = parse_target_scale(scale_name);
      loss.validate();
      const FeatureMatrix train = read_matrix(train_dir);
      TrainedModel model;
      std::vector<double> trace;
      if (kind == ModelKind::kNaive) {
        model = fit_naive(train);
      } else if (config.search_budget > 0 && !valid_dir.empty()) {
        model = search_hyperparams(train, read_matrix(valid_dir), kind, loss, config.search_budget,
                                   config.seed)
                    .best_model;
      } else if (kind == ModelKind::kGbrt) {
        model = fit_gbrt(train, loss, config.gbrt, trace_path.empty() ? nullptr : &trace);
      } else {
        if (loss.kind != LossKind::kMse) throw ValidationError("random forest supports mse only");
        model = fit_rf(train, loss.scale, config.rf);
      }
      save_model(model_path, model);
      if (!trace_path.empty()) {
        std::string csv = "round,train_loss\n";
        for (std::size_t i = 0; i < trace.size(); ++i) {
          csv += std::to_string(i + 1) + "," + format_double(trace[i]) + "\n";
        }
        write_file_atomic(trace_path, csv);
      }
      out.info("wrote " + model_path);
    } else if (search_cmd->parsed()) {
      const ModelKind kind = model_kind.empty() ? config.model : parse_model_kind(model_kind);
      LossSpec loss = config.loss;
      if (!loss_name.empty()) loss.kind = parse_loss_kind(loss_name);
      if (!scale_name.empty()) loss.scale = parse_target_scale(scale_name);
      const SearchResult result = search_hyperparams(read_matrix(train_dir), read_matrix(valid_dir),
                                                     kind, loss, budget, config.seed);
      save_model(model_path, result.best_model);
      if (!trials_path.empty()) {
        std::string csv =
            "trial,n_trees,max_depth,learning_rate,min_samples_leaf,subsample_rows,"
            "subsample_cols,valid_wmape\n";
        for (std::size_t i = 0; i < result.trials.size(); ++i) {
          const auto& t = result.trials[i];
          csv += std::to_string(i) + "," + std::to_string(t.config.n_trees) + "," +
                 std::to_string(t.config.max_depth) + "," + format_double(t.config.learning_rate) +
                 "," + std::to_string(t.config.min_samples_leaf) + "," +
                 format_double(t.config.subsample_rows) + "," +
                 format_double(t.config.subsample_cols) + "," + format_double(t.valid_wmape) +
                 "\n";
        }
        write_file_atomic(trials_path, csv);
      }
      out.info("best validation wMAPE " +
               format_double(std::min_element(result.trials.begin(), result.trials.end(),
                                              [](const auto& a, const auto& b) {
                                                return a.valid_wmape < b.valid_wmape;
                                              })->valid_wmape));
    } else if (evaluate_cmd->parsed()) {
      const TrainedModel model = load_model(model_path);
      const EvalReport report = evaluate(model, read_matrix(data));
      const std::vector<EvalReport> reports = {report};
      write_file_atomic(out_path, report_csv(reports));
      out.info(report_csv(reports));
    } else if (forecast_cmd->parsed()) {
      const TrainedModel model = load_model(model_path);
      const std::vector<ItemMeta> items = read_items_csv(items_path);
      if (items.empty()) throw ValidationError(items_path + ": no items");
      const std::string& type = items.front().article_type;
      for (const auto& item : items) {
        if (item.article_type != type) {
          throw ValidationError("forecast items must share one article type");
        }
      }
      const PreparedData prepared = prepare_data(load_split(data, config), config.features);
      const ArticleData* article = nullptr;
      for (const auto& a : prepared.articles) {
        if (a.article_type == type) article = &a;
      }
      if (!article) throw ValidationError("no training items of article type '" + type + "'");
      ColdStartAssumptions assumptions;
      if (!promos_path.empty()) assumptions.future_promos = read_promos(promos_path);
      const auto rows = forecast_new_items(model, items, horizon, article->encoder,
                                           prepared.stats, config.features, assumptions);
      write_file_atomic(out_path, forecast_csv(rows));
      out.info("wrote " + std::to_string(rows.size()) + " forecasts to " + out_path);
    } else if (sensitivity_cmd->parsed()) {
      const TrainedModel model = load_model(model_path);
      const FeatureMatrix matrix = read_matrix(data);
      const std::vector<double> grid =
          grid_text.empty() ? default_grid(matrix, feature) : parse_grid(grid_text);
      const auto curve = sensitivity_probe(model, matrix, feature, grid);
      write_file_atomic(out_path, sensitivity_csv(feature, curve));
      out.info(sensitivity_csv(feature, curve));
    } else if (benchmark_cmd->parsed()) {
      const fs::path dir = require_out_dir(g);
      if (!data.empty()) config.data_dir = data;
      if (!config.data_dir.empty()) require_distinct(config.data_dir, dir);
      const Catalog catalog = load_or_generate(config);
      const BenchmarkResult result = run_benchmark(config, catalog);
      out.warn(result.warnings);
      write_benchmark(dir, result);
      for (const auto& a : result.articles) {
        out.info("== " + a.article_type);
        out.info(report_csv(a.reports));
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "stylecast: error: " << e.what() << '\n';
    return 1;
  } catch (const UndefinedMetric& e) {
    std::cerr << "stylecast: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "stylecast: internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
