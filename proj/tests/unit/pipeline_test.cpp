#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"
#include "stylecast/pipeline.hpp"
#include "stylecast/split.hpp"
#include "test_support.hpp"

namespace stylecast {
namespace {

namespace fs = std::filesystem;

RunConfig quick_config() {
  RunConfig c;
  c.gbrt.n_trees = 20;
  c.gbrt.min_samples_leaf = 10;
  c.rf.n_trees = 5;
  c.runs = parse_runs("gbrt:mse:log, rf:mse:linear", std::nullopt);
  return c;
}

const PreparedData& prepared() {
  static const PreparedData data = [] {
    const Catalog catalog = testing::small_catalog(21, 150);
    return prepare_data(split_by_go_live(catalog, {}), {});
  }();
  return data;
}

TEST(RunStage, PrefixesAndKeepsCategory) {
  EXPECT_THROW(run_stage("load", [] { throw ValidationError("x"); }), ValidationError);
  EXPECT_THROW(run_stage("fit", [] { throw UndefinedMetric("x"); }), UndefinedMetric);
  try {
    run_stage("fit", []() -> int { throw std::runtime_error("boom"); });
    FAIL();
  } catch (const ValidationError&) {
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()), "stage 'fit': boom");
  }
  EXPECT_EQ(run_stage("ok", [] { return 3; }), 3);
}

TEST(PrepareData, OneArticleWithSharedSchema) {
  const PreparedData& p = prepared();
  ASSERT_EQ(p.articles.size(), 1u);
  const ArticleData& a = p.articles[0];
  EXPECT_FALSE(a.train.empty());
  EXPECT_EQ(a.train.columns(), a.valid.columns());
  EXPECT_EQ(a.train.columns(), a.test.columns());
}

TEST(RunBenchmark, NaiveOnlyGivesOneRow) {
  RunConfig c = quick_config();
  c.runs.clear();
  const BenchmarkResult r = run_benchmark(c, testing::small_catalog(21, 150));
  ASSERT_EQ(r.articles.size(), 1u);
  ASSERT_EQ(r.articles[0].reports.size(), 1u);
  EXPECT_EQ(r.articles[0].reports[0].model, "naive");
  EXPECT_EQ(r.articles[0].models[0].first, "naive");
}

TEST(RunBenchmark, SortedReportsAndWriteLayout) {
  const RunConfig c = quick_config();
  const BenchmarkResult r = run_benchmark(c, testing::small_catalog(21, 150));
  ASSERT_EQ(r.articles.size(), 1u);
  const auto& reports = r.articles[0].reports;
  ASSERT_EQ(reports.size(), 3u);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    ASSERT_TRUE(reports[i].wmape_item_week);
    EXPECT_LE(*reports[i - 1].wmape_item_week, *reports[i].wmape_item_week);
  }

  const auto dir = testing::temp_dir("bench");
  write_benchmark(dir, r);
  const std::string type = r.articles[0].article_type;
  EXPECT_EQ(parse_report_csv(read_file(dir / "reports" / (type + ".csv"))), reports);
  for (const auto& [label, model] : r.articles[0].models) {
    EXPECT_TRUE(fs::exists(dir / "models" / type / (label + ".model"))) << label;
  }
}

TEST(WriteBenchmark, CleansUpOnFailure) {
  BenchmarkResult r = run_benchmark([] {
    RunConfig c = quick_config();
    c.runs.clear();
    return c;
  }(), testing::small_catalog(21, 150));
  ArticleResult bad = r.articles[0];
  bad.article_type = "zz";
  r.articles.push_back(bad);
  const auto dir = testing::temp_dir("bench_fail");
  // A directory where the second report file should go makes its write fail.
  fs::create_directories(dir / "reports" / "zz.csv" / "blocker");
  EXPECT_ANY_THROW(write_benchmark(dir, r));
  EXPECT_FALSE(fs::exists(dir / "reports" / (r.articles[0].article_type + ".csv")));
  EXPECT_FALSE(fs::exists(dir / "reports" / "zz.csv.tmp"));
  EXPECT_FALSE(fs::exists(dir / "models"));
}

TEST(Sensitivity, NaiveIsFlat) {
  const ArticleData& a = prepared().articles[0];
  const TrainedModel naive = fit_naive(a.train);
  const auto grid = default_grid(a.test, "disc_dev_platform");
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  const auto curve = sensitivity_probe(naive, a.test, "disc_dev_platform", grid);
  for (const auto& p : curve) {
    EXPECT_EQ(p.mean_forecast, curve.front().mean_forecast);
    EXPECT_NEAR(p.mean_forecast, naive.base_score, 1e-12 * naive.base_score);
  }
  EXPECT_THROW(probe_columns(a.test.columns(), "no_such_feature"), ValidationError);
}

TEST(Sensitivity, ProbeColumnsIncludeLags) {
  const std::vector<std::string> schema = {"price", "units_lag1", "units_lag2", "units_lagx", "units"};
  EXPECT_EQ(probe_columns(schema, "units"), (std::vector<std::size_t>{1, 2, 4}));
  const std::vector<SensitivityPoint> curve = {{0.5, 2.0}, {1.0, 3.25}};
  EXPECT_EQ(sensitivity_csv("price", curve), "price,mean_forecast\n0.5,2\n1,3.25\n");
}

TEST(ForecastNewItems, HorizonPrefixAndRareAttributes) {
  const PreparedData& p = prepared();
  const ArticleData& a = p.articles[0];
  RunConfig c = quick_config();
  const TrainedModel model = train_run(a, c.runs[0], c);

  std::vector<ItemMeta> items = {
      testing::make_item("new1", "brand_00", 30.0, 60, {}, a.article_type),
      testing::make_item("new2", "never_seen_brand", 55.0, 61,
                         {{"colour", "ultraviolet"}, {"material", "unobtainium"}}, a.article_type)};
  const ColdStartAssumptions assumptions;
  const auto one = forecast_new_items(model, items, 1, a.encoder, p.stats, {}, assumptions);
  const auto four = forecast_new_items(model, items, 4, a.encoder, p.stats, {}, assumptions);
  ASSERT_EQ(one.size(), 2u);
  ASSERT_EQ(four.size(), 8u);
  for (const auto& row : four) {
    EXPECT_TRUE(std::isfinite(row.units));
    EXPECT_GE(row.units, 0.0);
  }
  for (const auto& r1 : one) {
    const auto match = std::find_if(four.begin(), four.end(), [&](const ForecastRow& r) {
      return r.item_id == r1.item_id && r.week == r1.week;
    });
    ASSERT_NE(match, four.end());
    EXPECT_EQ(match->units, r1.units);
  }
  EXPECT_EQ(forecast_csv(one).substr(0, 29), "item_id,week,forecast_units\nn");
}

}  // namespace
}  // namespace stylecast
