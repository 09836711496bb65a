#include "stylecast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "stylecast/error.hpp"
#include "stylecast/fs_util.hpp"

namespace stylecast {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": vector lengths differ (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
  }
}

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + ": non-finite input");
  }
}

}  // namespace

double wmape(std::span<const RowKey> keys, std::span<const double> actual,
             std::span<const double> forecast, AggregationLevel level) {
  check_lengths(keys.size(), actual.size(), "wmape");
  check_lengths(actual.size(), forecast.size(), "wmape");
  check_finite(actual, "wmape");
  check_finite(forecast, "wmape");
  const double total_actual = std::accumulate(actual.begin(), actual.end(), 0.0);
  if (!(total_actual > 0.0)) throw UndefinedMetric("wMAPE is undefined when actuals sum to zero");

  double error = 0.0;
  switch (level) {
    case AggregationLevel::kItemWeek:
      for (std::size_t i = 0; i < actual.size(); ++i) error += std::abs(forecast[i] - actual[i]);
      break;
    case AggregationLevel::kItem: {
      std::map<std::string_view, std::pair<double, double>> totals;
      for (std::size_t i = 0; i < actual.size(); ++i) {
        auto& t = totals[keys[i].item_id];
        t.first += actual[i];
        t.second += forecast[i];
      }
      for (const auto& [item, t] : totals) error += std::abs(t.second - t.first);
      break;
    }
    case AggregationLevel::kArticle: {
      const double total_forecast = std::accumulate(forecast.begin(), forecast.end(), 0.0);
      error = std::abs(total_forecast - total_actual);
      break;
    }
  }
  return error / total_actual;
}

double mape(std::span<const double> actual, std::span<const double> forecast) {
  check_lengths(actual.size(), forecast.size(), "mape");
  if (actual.empty()) throw UndefinedMetric("MAPE of an empty series is undefined");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      throw UndefinedMetric("MAPE is undefined (infinite) when an actual value is zero");
    }
    sum += std::abs((forecast[i] - actual[i]) / actual[i]);
  }
  return sum / static_cast<double>(actual.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size(), "pearson");
  check_finite(x, "pearson");
  check_finite(y, "pearson");
  if (x.size() < 2) throw UndefinedMetric("Pearson correlation needs at least two points");
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) {
    throw UndefinedMetric("Pearson correlation is undefined for a constant vector");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0 && syy > 0.0)) {
    throw UndefinedMetric("Pearson correlation is undefined for a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

/// Sorts `v` ascending and returns the number of inversions removed.
std::int64_t merge_sort_inversions(std::vector<double>& v, std::vector<double>& scratch,
                                   std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_sort_inversions(v, scratch, lo, mid) +
                       merge_sort_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

PairCounts kendall_pair_counts(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size(), "kendall_tau");
  check_finite(x, "kendall_tau");
  check_finite(y, "kendall_tau");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });

  std::int64_t ties_x = 0, ties_xy = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    ties_x += tied_pairs(static_cast<std::int64_t>(j - i));
    for (std::size_t a = i; a < j;) {
      std::size_t b = a;
      while (b < j && y[order[b]] == y[order[a]]) ++b;
      ties_xy += tied_pairs(static_cast<std::int64_t>(b - a));
      a = b;
    }
    i = j;
  }

  std::vector<double> ys(n), scratch(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::int64_t swaps = merge_sort_inversions(ys, scratch, 0, n);

  std::int64_t ties_y = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && ys[j] == ys[i]) ++j;
    ties_y += tied_pairs(static_cast<std::int64_t>(j - i));
    i = j;
  }

  const std::int64_t all_pairs = tied_pairs(static_cast<std::int64_t>(n));
  PairCounts c;
  c.discordant = swaps;
  c.concordant = all_pairs - ties_x - ties_y + ties_xy - swaps;
  c.ties_x_only = ties_x - ties_xy;
  c.ties_y_only = ties_y - ties_xy;
  c.ties_both = ties_xy;
  return c;
}

double tau_b(const PairCounts& c) {
  const std::int64_t pq = c.concordant + c.discordant;
  const double denom = std::sqrt(static_cast<double>(pq + c.ties_x_only) *
                                 static_cast<double>(pq + c.ties_y_only));
  if (!(denom > 0.0)) throw UndefinedMetric("Kendall tau is undefined: zero denominator");
  return static_cast<double>(c.concordant - c.discordant) / denom;
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) throw UndefinedMetric("Kendall tau needs at least two points");
  return tau_b(kendall_pair_counts(x, y));
}

std::string report_loss_label(const TrainedModel& model) {
  return model.kind == ModelKind::kNaive ? "none" : to_string(model.loss.kind);
}

std::string report_scale_label(const TrainedModel& model) {
  return to_string(model.loss.scale);
}

namespace {

template <typename F>
std::optional<double> defined(F&& f) {
  try {
    return f();
  } catch (const UndefinedMetric&) {
    return std::nullopt;
  }
}

}  // namespace

EvalReport evaluate_forecast(const FeatureMatrix& data, std::span<const double> forecast) {
  check_lengths(data.rows(), forecast.size(), "evaluate");
  const auto& actual = data.target();
  EvalReport report;
  report.n_rows = static_cast<std::int64_t>(data.rows());
  report.wmape_item_week =
      defined([&] { return wmape(data.keys(), actual, forecast, AggregationLevel::kItemWeek); });
  report.wmape_item =
      defined([&] { return wmape(data.keys(), actual, forecast, AggregationLevel::kItem); });
  report.wmape_article =
      defined([&] { return wmape(data.keys(), actual, forecast, AggregationLevel::kArticle); });

  std::map<std::string_view, std::pair<double, double>> totals;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    auto& t = totals[data.keys()[r].item_id];
    t.first += actual[r];
    t.second += forecast[r];
  }
  std::vector<double> item_actual, item_forecast;
  for (const auto& [item, t] : totals) {
    item_actual.push_back(t.first);
    item_forecast.push_back(t.second);
  }
  report.n_items = static_cast<std::int64_t>(totals.size());
  report.pearson_r = defined([&] { return pearson(item_actual, item_forecast); });
  report.kendall_tau = defined([&] { return kendall_tau(item_actual, item_forecast); });
  return report;
}

EvalReport evaluate(const TrainedModel& model, const FeatureMatrix& data) {
  const std::vector<double> forecast = predict(model, data);
  EvalReport report = evaluate_forecast(data, forecast);
  report.model = to_string(model.kind);
  report.loss = report_loss_label(model);
  report.scale = report_scale_label(model);
  return report;
}

namespace {

constexpr std::string_view kReportHeader =
    "model,loss,scale,wmape_item_week,wmape_item,wmape_article,pearson_r,kendall_tau,n_items,n_rows";

std::string optional_text(const std::optional<double>& v) {
  return v ? format_double(*v) : "null";
}

std::optional<double> parse_optional(std::string_view text, std::string_view what) {
  if (text == "null") return std::nullopt;
  return parse_double(text, what);
}

}  // namespace

std::string report_csv(std::span<const EvalReport> reports) {
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << r.model << ',' << r.loss << ',' << r.scale << ',' << optional_text(r.wmape_item_week)
        << ',' << optional_text(r.wmape_item) << ',' << optional_text(r.wmape_article) << ','
        << optional_text(r.pearson_r) << ',' << optional_text(r.kendall_tau) << ',' << r.n_items
        << ',' << r.n_rows << '\n';
  }
  return out.str();
}

std::vector<EvalReport> parse_report_csv(const std::string& text) {
  std::vector<EvalReport> out;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kReportHeader) {
    throw ValidationError("report CSV must start with header '" + std::string(kReportHeader) + "'");
  }
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto f = split_fields(trim(line));
    if (f.size() != 10) throw ValidationError("report row must have 10 fields");
    EvalReport r;
    r.model = std::string(f[0]);
    r.loss = std::string(f[1]);
    r.scale = std::string(f[2]);
    r.wmape_item_week = parse_optional(f[3], "wmape_item_week");
    r.wmape_item = parse_optional(f[4], "wmape_item");
    r.wmape_article = parse_optional(f[5], "wmape_article");
    r.pearson_r = parse_optional(f[6], "pearson_r");
    r.kendall_tau = parse_optional(f[7], "kendall_tau");
    r.n_items = parse_int(f[8], "n_items");
    r.n_rows = parse_int(f[9], "n_rows");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace stylecast
