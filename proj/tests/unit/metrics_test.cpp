#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "metric_oracle.hpp"
#include "stylecast/error.hpp"
#include "stylecast/metrics.hpp"
#include "test_support.hpp"

namespace stylecast {
namespace {

std::vector<RowKey> one_week_per_item(std::size_t n) {
  std::vector<RowKey> keys;
  for (std::size_t i = 0; i < n; ++i) keys.push_back({"i" + std::to_string(i), 0});
  return keys;
}

TEST(Wmape, WorkedExample) {
  const std::vector<double> actual = {0, 5, 10}, forecast = {1, 10, 10};
  const auto keys = one_week_per_item(3);
  EXPECT_EQ(wmape(keys, actual, forecast, AggregationLevel::kItem), 0.4);
  EXPECT_EQ(wmape(keys, actual, forecast, AggregationLevel::kItemWeek), 0.4);
  EXPECT_THROW(mape(actual, forecast), UndefinedMetric);
}

TEST(Wmape, Bounds) {
  const std::vector<double> actual = {2, 3}, zero = {0, 0};
  const auto keys = one_week_per_item(2);
  for (auto level : {AggregationLevel::kItemWeek, AggregationLevel::kItem, AggregationLevel::kArticle}) {
    EXPECT_EQ(wmape(keys, actual, zero, level), 1.0);
    EXPECT_EQ(wmape(keys, actual, actual, level), 0.0);
    EXPECT_THROW(wmape(keys, zero, actual, level), UndefinedMetric);
  }
  EXPECT_THROW(wmape(keys, actual, std::vector<double>{1}, AggregationLevel::kItem), ValidationError);
}

TEST(Wmape, NestedLevelsAreOrdered) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> items(1, 6), units(0, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RowKey> keys;
    std::vector<double> a, f;
    const int n = 1 + trial % 40;
    for (int r = 0; r < n; ++r) {
      keys.push_back({"i" + std::to_string(items(rng)), r});
      a.push_back(units(rng));
      f.push_back(units(rng) * 0.7);
    }
    a[0] += 1;
    const double iw = wmape(keys, a, f, AggregationLevel::kItemWeek);
    const double it = wmape(keys, a, f, AggregationLevel::kItem);
    const double ar = wmape(keys, a, f, AggregationLevel::kArticle);
    EXPECT_GE(iw + 1e-12, it);
    EXPECT_GE(it + 1e-12, ar);
  }
}

TEST(Pearson, Examples) {
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}), 9.0 / std::sqrt(84.0), 1e-15);
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}), 0.98198, 5e-6);
  EXPECT_EQ(pearson(std::vector<double>{1, 5, 2}, std::vector<double>{1, 5, 2}), 1.0);
  EXPECT_EQ(pearson(std::vector<double>{1, 5, 2}, std::vector<double>{-1, -5, -2}), -1.0);
  EXPECT_THROW(pearson(std::vector<double>{1, 1}, std::vector<double>{1, 2}), UndefinedMetric);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), UndefinedMetric);
}

TEST(Pearson, AffineInvariantAndMatchesDirectFormula) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(3 + trial), y(3 + trial), z(3 + trial);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = n(rng);
      y[i] = x[i] + n(rng);
      z[i] = 3.0 * y[i] + 7.0;
    }
    const double r = pearson(x, y);
    EXPECT_NEAR(r, testing::direct_pearson(x, y), 1e-12);
    EXPECT_NEAR(pearson(x, z), r, 1e-12);
  }
}

TEST(Kendall, Examples) {
  EXPECT_EQ(kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 1.0);
  EXPECT_EQ(kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0);
  const std::vector<double> x = {1, 2, 2}, y = {1, 2, 3};
  EXPECT_EQ(kendall_pair_counts(x, y), (PairCounts{2, 0, 1, 0, 0}));
  EXPECT_NEAR(kendall_tau(x, y), 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_THROW(kendall_tau(std::vector<double>{4, 4}, std::vector<double>{1, 2}), UndefinedMetric);
  EXPECT_THROW(kendall_tau(std::vector<double>{4}, std::vector<double>{1}), UndefinedMetric);
}

TEST(Kendall, MatchesBruteForceWithTies) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 200;
    const int range = 1 + static_cast<int>(rng() % 30);
    const auto x = testing::tied_vector(rng, n, range);
    const auto y = testing::tied_vector(rng, n, range);
    EXPECT_EQ(kendall_pair_counts(x, y), testing::brute_force_pairs(x, y)) << trial;
  }
}

TEST(Evaluate, PerfectForecast) {
  FeatureMatrix m({"x"});
  const double v[] = {0};
  m.add_row({"a", 0}, v, 3);
  m.add_row({"a", 1}, v, 1);
  m.add_row({"b", 0}, v, 5);
  m.add_row({"c", 0}, v, 2);
  const EvalReport r = evaluate_forecast(m, m.target());
  EXPECT_EQ(r.wmape_item_week, 0.0);
  EXPECT_EQ(r.wmape_item, 0.0);
  EXPECT_EQ(r.wmape_article, 0.0);
  EXPECT_EQ(r.pearson_r, 1.0);
  EXPECT_EQ(r.kendall_tau, 1.0);
  EXPECT_EQ(r.n_items, 3);
  EXPECT_EQ(r.n_rows, 4);
}

TEST(Evaluate, UndefinedMetricsBecomeNull) {
  FeatureMatrix m({"x"});
  const double v[] = {0};
  m.add_row({"a", 0}, v, 0);
  m.add_row({"b", 0}, v, 0);
  const EvalReport r = evaluate_forecast(m, std::vector<double>{1, 1});
  EXPECT_FALSE(r.wmape_item_week);
  EXPECT_FALSE(r.pearson_r);
  EXPECT_FALSE(r.kendall_tau);
  EXPECT_EQ(r.n_rows, 2);
}

TEST(ReportCsv, RoundTrip) {
  std::vector<EvalReport> reports(2);
  reports[0] = {"gbrt", "mse", "log", 0.1 + 0.2, 1.0 / 3.0, 0.0, 0.987654321, std::nullopt, 17, 400};
  reports[1] = {"naive", "none", "linear", 1.0, 0.5, std::nullopt, std::nullopt, -0.25, 3, 9};
  const std::string text = report_csv(reports);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "model,loss,scale,wmape_item_week,wmape_item,wmape_article,pearson_r,kendall_tau,n_items,n_rows");
  EXPECT_EQ(parse_report_csv(text), reports);
  EXPECT_THROW(parse_report_csv("bad header\n"), ValidationError);
}

}  // namespace
}  // namespace stylecast
