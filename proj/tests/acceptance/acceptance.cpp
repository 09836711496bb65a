// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "metric_oracle.hpp"
#include "stylecast/config.hpp"
#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"
#include "stylecast/losses.hpp"
#include "stylecast/model_io.hpp"
#include "stylecast/pipeline.hpp"
#include "stylecast/split.hpp"
#include "stylecast/synthgen.hpp"
#include "tree_oracle.hpp"

namespace fs = std::filesystem;
using namespace stylecast;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const fs::path kWork = fs::temp_directory_path() / "stylecast_acceptance";

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

// ---- 1: worked wMAPE example ------------------------------------------------

Outcome worked_example() {
  const std::vector<double> actual = {0, 5, 10}, forecast = {1, 10, 10};
  const std::vector<RowKey> keys = {{"a", 0}, {"b", 0}, {"c", 0}};
  const double w = wmape(keys, actual, forecast, AggregationLevel::kItem);
  bool mape_undefined = false;
  try {
    mape(actual, forecast);
  } catch (const UndefinedMetric&) {
    mape_undefined = true;
  }
  return {w == 0.4 && mape_undefined,
          "wMAPE " + format_double(w) + ", MAPE " + (mape_undefined ? "undefined" : "defined")};
}

// ---- 2: naive identity -------------------------------------------------------

Outcome naive_identity() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    FeatureMatrix m({"x"});
    const std::size_t n = 1 + rng() % 500;
    std::negative_binomial_distribution<int> units(1, 0.2);
    for (std::size_t r = 0; r < n; ++r) {
      const double v[] = {0.0};
      m.add_row({"i" + std::to_string(r % 37), static_cast<Week>(r)}, v, units(rng) + (r == 0));
    }
    const auto forecast = predict(fit_naive(m), m);
    worst = std::max(worst, wmape(m.keys(), m.target(), forecast, AggregationLevel::kArticle));
  }
  // The naive model of the benchmark's training partitions as well.
  const RunConfig config;
  const PreparedData data = prepare_data(split_by_go_live(generate(config.gen), config.split), {});
  for (const auto& a : data.articles) {
    const auto forecast = predict(fit_naive(a.train), a.train);
    worst = std::max(worst, wmape(a.train.keys(), a.train.target(), forecast, AggregationLevel::kArticle));
  }
  return {worst <= 1e-9, "max article-level train wMAPE " + fmt(worst)};
}

// ---- 3: metric oracles -------------------------------------------------------

Outcome metric_oracles() {
  std::mt19937_64 rng(3);
  int kendall_mismatch = 0;
  double pearson_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 499;
    const int range = 1 + static_cast<int>(rng() % 50);
    const auto x = testing::tied_vector(rng, n, range);
    const auto y = testing::tied_vector(rng, n, range);
    const PairCounts oracle = testing::brute_force_pairs(x, y);
    if (kendall_pair_counts(x, y) != oracle) ++kendall_mismatch;
    const double pq = static_cast<double>(oracle.concordant + oracle.discordant);
    const double denom = std::sqrt((pq + oracle.ties_x_only) * (pq + oracle.ties_y_only));
    if (denom > 0) {
      const double expected = (oracle.concordant - oracle.discordant) / denom;
      if (kendall_tau(x, y) != expected) ++kendall_mismatch;
    }
    try {
      pearson_err = std::max(pearson_err, std::abs(pearson(x, y) - testing::direct_pearson(x, y)));
    } catch (const UndefinedMetric&) {
    }
  }
  return {kendall_mismatch == 0 && pearson_err <= 1e-12,
          std::to_string(kendall_mismatch) + " Kendall mismatches, max Pearson error " + fmt(pearson_err)};
}

// ---- 4: loss derivatives ---------------------------------------------------

double point_loss(const LossSpec& spec, double y, double s) {
  const double ys[] = {y}, ss[] = {s};
  return loss_value(spec, ys, ss);
}

GradHess point_grad(const LossSpec& spec, double y, double s) {
  const double ys[] = {y}, ss[] = {s};
  return loss_grad_hess(spec, ys, ss);
}

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale < 1e-12 ? 0.0 : std::abs(a - b) / scale;
}

Outcome loss_derivatives() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> score(-3.0, 3.0);
  std::uniform_real_distribution<double> real_target(-4.0, 4.0);
  std::poisson_distribution<int> count(3.0);
  const double h = 1e-5;
  const double delta = 1.3;
  const LossSpec specs[] = {{LossKind::kMse, TargetScale::kLinear, {}},
                            {LossKind::kPoisson, TargetScale::kLinear, {}},
                            {LossKind::kHuber, TargetScale::kLinear, delta}};
  double worst = 0.0;
  int checked = 0;
  for (int v = 0; v < 100; ++v) {
    for (int i = 0; i < 20; ++i) {
      for (const auto& spec : specs) {
        const double s = score(rng);
        const double y = spec.kind == LossKind::kPoisson ? count(rng) : real_target(rng);
        if (spec.kind == LossKind::kHuber && std::abs(std::abs(s - y) - delta) < 1e-3) continue;
        const GradHess gh = point_grad(spec, y, s);
        const double fd_g = (point_loss(spec, y, s + h) - point_loss(spec, y, s - h)) / (2 * h);
        const double fd_h =
            (point_grad(spec, y, s + h).gradient[0] - point_grad(spec, y, s - h).gradient[0]) / (2 * h);
        worst = std::max(worst, rel_err(gh.gradient[0], fd_g));
        worst = std::max(worst, rel_err(gh.curvature[0], std::max(fd_h, kCurvatureFloor)));
        ++checked;
      }
    }
  }
  return {worst <= 1e-5, std::to_string(checked) + " points, max relative error " + fmt(worst)};
}

// ---- 5: split oracle ---------------------------------------------------------

Outcome split_oracle() {
  std::mt19937_64 rng(5);
  int mismatches = 0, nontrivial = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = testing::random_split_fixture(rng);
    std::mt19937_64 fit_rng(trial);
    const Tree tree = fit_tree(f.x, f.g, f.h, f.config, fit_rng);
    if (tree.nodes() != testing::oracle_tree(f.x, f.g, f.h, f.config)) ++mismatches;
    nontrivial += tree.nodes().size() > 1;
  }
  return {mismatches == 0,
          std::to_string(mismatches) + " of 50 differ (" + std::to_string(nontrivial) + " with splits)"};
}

// ---- benchmark fixtures shared by 6-10 ----------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string(STYLECAST_CLI) + " --quiet " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct BenchmarkRun {
  bool ok = false;
  std::string error;
  RunConfig config;
  PreparedData data;
};

const BenchmarkRun& benchmark_run() {
  static const BenchmarkRun run = [] {
    BenchmarkRun r;
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    for (const char* name : {"run_a", "run_b"}) {
      const int code = run_cli("benchmark --out-dir " + (kWork / name).string());
      if (code != 0) {
        r.error = std::string("benchmark ") + name + " exited with " + std::to_string(code);
        return r;
      }
    }
    r.data = prepare_data(split_by_go_live(generate(r.config.gen), r.config.split), r.config.features);
    r.ok = true;
    return r;
  }();
  return run;
}

fs::path model_path(const std::string& type, const std::string& label) {
  return kWork / "run_a" / "models" / type / (label + ".model");
}

// ---- 6: benchmark quality ----------------------------------------------------

Outcome benchmark_quality() {
  const BenchmarkRun& run = benchmark_run();
  if (!run.ok) return {false, run.error};
  bool pass = !run.data.articles.empty();
  std::string detail;
  for (const auto& a : run.data.articles) {
    const auto reports =
        parse_report_csv(read_file(kWork / "run_a" / "reports" / (a.article_type + ".csv")));
    const EvalReport* naive = nullptr;
    const EvalReport* best = nullptr;
    for (const auto& r : reports) {
      if (r.model == "naive") naive = &r;
      if (r.model == "gbrt" && r.loss == "mse" && r.scale == "log") best = &r;
    }
    if (!naive || !best || !naive->wmape_item_week || !best->wmape_item_week || !best->pearson_r ||
        !best->kendall_tau) {
      return {false, a.article_type + ": missing naive or gbrt/mse/log metrics"};
    }
    bool all_beat = true;
    for (const auto& r : reports) {
      if (r.model != "naive" && !(r.wmape_item_week && *r.wmape_item_week < *naive->wmape_item_week)) {
        all_beat = false;
      }
    }
    const double ratio = *best->wmape_item_week / *naive->wmape_item_week;
    pass = pass && ratio <= 0.75 && *best->pearson_r >= 0.75 && *best->kendall_tau >= 0.55 && all_beat;
    detail += a.article_type + ": wMAPE " + fmt(*best->wmape_item_week) + " vs naive " +
              fmt(*naive->wmape_item_week) + " (ratio " + fmt(ratio) + "), r " +
              fmt(*best->pearson_r) + ", tau " + fmt(*best->kendall_tau) +
              (all_beat ? ", all ML beat naive; " : ", some ML model loses to naive; ");
  }
  return {pass, detail};
}

// ---- 7: sensitivity directions -----------------------------------------------

Outcome sensitivity_directions() {
  const BenchmarkRun& run = benchmark_run();
  if (!run.ok) return {false, run.error};
  struct Probe {
    const char* feature;
    int direction;  // +1 non-decreasing, -1 non-increasing
  };
  const Probe probes[] = {{"disc_dev_platform", +1}, {"vis_ratio_platform", +1}, {"n_live_same_brand", -1}};
  bool pass = true;
  std::string detail;
  for (const auto& a : run.data.articles) {
    const TrainedModel model = load_model(model_path(a.article_type, "gbrt_mse_log"));
    for (const auto& probe : probes) {
      const auto grid = default_grid(a.test, probe.feature, 5);
      const auto curve = sensitivity_probe(model, a.test, probe.feature, grid);
      double lo = curve.front().mean_forecast, hi = lo;
      for (const auto& p : curve) {
        lo = std::min(lo, p.mean_forecast);
        hi = std::max(hi, p.mean_forecast);
      }
      int inversions = 0;
      double worst = 0.0;
      for (std::size_t i = 1; i < curve.size(); ++i) {
        const double step = probe.direction * (curve[i].mean_forecast - curve[i - 1].mean_forecast);
        if (step < 0) {
          ++inversions;
          worst = std::max(worst, -step);
        }
      }
      const double range = hi - lo;
      const bool ok = inversions == 0 || (inversions == 1 && worst < 0.02 * range);
      pass = pass && ok;
      detail += a.article_type + "/" + probe.feature + ": " + fmt(curve.front().mean_forecast) +
                "->" + fmt(curve.back().mean_forecast) + ", " + std::to_string(inversions) +
                " inversions; ";
    }
  }
  return {pass, detail};
}

// ---- 8: monotone training loss -----------------------------------------------

Outcome monotone_loss() {
  const BenchmarkRun& run = benchmark_run();
  if (!run.ok) return {false, run.error};
  int increases = 0;
  std::size_t rounds = 0;
  for (const auto& a : run.data.articles) {
    for (auto scale : {TargetScale::kLog, TargetScale::kLinear}) {
      std::vector<double> trace;
      fit_gbrt(a.train, {LossKind::kMse, scale, {}}, run.config.gbrt, &trace);
      rounds += trace.size();
      for (std::size_t i = 1; i < trace.size(); ++i) increases += trace[i] > trace[i - 1];
    }
  }
  return {increases == 0 && rounds > 0,
          std::to_string(increases) + " increases over " + std::to_string(rounds) + " rounds"};
}

// ---- 9: determinism ------------------------------------------------------------

Outcome determinism() {
  const BenchmarkRun& run = benchmark_run();
  if (!run.ok) return {false, run.error};
  int files = 0, differ = 0;
  for (const auto& e : fs::recursive_directory_iterator(kWork / "run_a")) {
    if (!e.is_regular_file()) continue;
    const fs::path other = kWork / "run_b" / fs::relative(e.path(), kWork / "run_a");
    ++files;
    if (!fs::exists(other) || read_file(e.path()) != read_file(other)) ++differ;
  }
  int extra = 0;
  for (const auto& e : fs::recursive_directory_iterator(kWork / "run_b")) {
    if (e.is_regular_file() && !fs::exists(kWork / "run_a" / fs::relative(e.path(), kWork / "run_b"))) {
      ++extra;
    }
  }
  return {files > 0 && differ == 0 && extra == 0,
          std::to_string(files) + " files compared, " + std::to_string(differ + extra) + " differ"};
}

// ---- 10: cold start ------------------------------------------------------------

Outcome cold_start() {
  const BenchmarkRun& run = benchmark_run();
  if (!run.ok) return {false, run.error};
  bool pass = true;
  std::size_t rows = 0;
  for (const auto& a : run.data.articles) {
    const TrainedModel model = load_model(model_path(a.article_type, "gbrt_mse_log"));
    std::vector<ItemMeta> items;
    for (int i = 0; i < 3; ++i) {
      ItemMeta item;
      item.item_id = "NEW" + std::to_string(i);
      item.article_type = a.article_type;
      item.brand = "unseen_brand_" + std::to_string(i);
      item.price_point = 20.0 + 40.0 * i;
      item.go_live_week = 104 + i;
      item.attributes = {{"colour", "never_seen_" + std::to_string(i)}, {"material", "mystery"}};
      items.push_back(item);
    }
    const int horizon = 8;
    ColdStartAssumptions assumptions;
    const FeatureMatrix m = build_cold_start_matrix(items, horizon, a.encoder, run.data.stats,
                                                    run.config.features, assumptions);
    // Every block of the encoder must resolve to its RARE column.
    for (const auto& block : a.encoder.blocks()) {
      const auto col = m.column_index(block.name + "=" + kRareValue);
      if (!col) return {false, "missing RARE column for " + block.name};
      for (std::size_t r = 0; r < m.rows(); ++r) pass = pass && m.at(r, *col) == 1.0;
    }
    const auto forecast = forecast_new_items(model, items, horizon, a.encoder, run.data.stats,
                                             run.config.features, assumptions);
    pass = pass && forecast.size() == items.size() * horizon;
    for (const auto& row : forecast) pass = pass && std::isfinite(row.units) && row.units >= 0.0;
    rows += forecast.size();
  }
  return {pass, std::to_string(rows) + " forecasts, all finite and non-negative"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"wMAPE worked example", worked_example},
      {"naive article-level identity", naive_identity},
      {"Kendall and Pearson oracles", metric_oracles},
      {"loss derivatives vs finite differences", loss_derivatives},
      {"split search vs exhaustive oracle", split_oracle},
      {"synthetic benchmark quality", benchmark_quality},
      {"sensitivity directions", sensitivity_directions},
      {"monotone GBRT-MSE training loss", monotone_loss},
      {"benchmark determinism", determinism},
      {"cold-start forecasts", cold_start},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": "
              << criteria[i].first << " [" << fmt(seconds) << " s] " << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
