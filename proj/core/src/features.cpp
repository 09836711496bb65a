#include "stylecast/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace stylecast {

void FeatureConfig::validate() const {
  if (lags < 0) throw ValidationError("lags must be >= 0");
  if (n_harmonics < 1) throw ValidationError("n_harmonics must be >= 1");
  if (!(price_band_fraction > 0.0 && price_band_fraction < 1.0)) {
    throw ValidationError("price_band_fraction must be in (0, 1)");
  }
  if (!(rare_threshold >= 0.0 && rare_threshold < 1.0)) {
    throw ValidationError("rare_threshold must be in [0, 1)");
  }
  if (promo_horizon < 1) throw ValidationError("promo_horizon must be >= 1");
}

// ---------------------------------------------------------------------------
// Attribute encoding

namespace {
constexpr const char* kBrandBlock = "brand";
constexpr std::string_view kAttrBlockPrefix = "attr:";

const std::string* block_value(const ItemMeta& item, const std::string& block) {
  if (block == kBrandBlock) return &item.brand;
  auto it = item.attributes.find(block.substr(kAttrBlockPrefix.size()));
  return it == item.attributes.end() ? nullptr : &it->second;
}
}  // namespace

AttributeEncoder::AttributeEncoder(std::string article_type, std::vector<Block> blocks)
    : article_type_(std::move(article_type)), blocks_(std::move(blocks)) {
  std::sort(blocks_.begin(), blocks_.end(),
            [](const Block& a, const Block& b) { return a.name < b.name; });
  for (auto& block : blocks_) {
    std::sort(block.retained.begin(), block.retained.end());
    for (const auto& value : block.retained) columns_.push_back(block.name + "=" + value);
    columns_.push_back(block.name + "=" + kRareValue);
  }
}

void AttributeEncoder::encode(const ItemMeta& item, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::size_t offset = 0;
  for (const auto& block : blocks_) {
    const std::string* value = block_value(item, block.name);
    std::size_t hit = block.retained.size();  // RARE
    if (value != nullptr) {
      auto it = std::lower_bound(block.retained.begin(), block.retained.end(), *value);
      if (it != block.retained.end() && *it == *value) {
        hit = static_cast<std::size_t>(it - block.retained.begin());
      }
    }
    out[offset + hit] = 1.0;
    offset += block.retained.size() + 1;
  }
}

AttributeEncoder fit_encoder(std::span<const ItemMeta> train_items, const FeatureConfig& config) {
  config.validate();
  if (train_items.empty()) throw ValidationError("cannot fit attribute encoder on no items");
  const std::string& type = train_items.front().article_type;
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& item : train_items) {
    if (item.article_type != type) {
      throw ValidationError("attribute encoder expects one article type, found '" + type +
                            "' and '" + item.article_type + "'");
    }
    ++counts[kBrandBlock][item.brand];
    for (const auto& [name, value] : item.attributes) {
      ++counts[std::string(kAttrBlockPrefix) + name][value];
    }
  }
  const double n = static_cast<double>(train_items.size());
  std::vector<AttributeEncoder::Block> blocks;
  for (const auto& [name, values] : counts) {
    AttributeEncoder::Block block{name, {}};
    for (const auto& [value, count] : values) {
      if (!(static_cast<double>(count) / n < config.rare_threshold)) block.retained.push_back(value);
    }
    blocks.push_back(std::move(block));
  }
  return AttributeEncoder(type, std::move(blocks));
}

// ---------------------------------------------------------------------------
// Single-row feature operations

DiscountDeviation discount_features(const ObservationRow& obs, double brand_mean,
                                    double platform_mean) {
  return {obs.discount_fraction - brand_mean, obs.discount_fraction - platform_mean};
}

VisibilityRatio visibility_features(const ObservationRow& obs, double brand_mean_views,
                                    double platform_mean_views) {
  const auto ratio = [&](double mean) { return mean > 0.0 ? obs.list_views / mean : 1.0; };
  return {ratio(brand_mean_views), ratio(platform_mean_views)};
}

PromoDistance promo_features(Week week, const PromoCalendar& promos, int horizon) {
  PromoDistance out{horizon, horizon, promos.contains(week)};
  if (auto next = promos.next_at_or_after(week)) out.weeks_to_next = std::min(horizon, *next - week);
  if (auto last = promos.last_at_or_before(week)) out.weeks_since_last = std::min(horizon, week - *last);
  return out;
}

DerivedFeatures derived_features(const ItemMeta& item, Week week, const FeatureConfig& config,
                                 Week experiment_start_week) {
  if (week < item.go_live_week) {
    throw ValidationError("item '" + item.item_id + "': week " + std::to_string(week) +
                          " precedes go_live_week " + std::to_string(item.go_live_week));
  }
  DerivedFeatures out;
  out.age = week - item.go_live_week;
  out.trend = week - experiment_start_week;
  const int week_of_year = ((week % 52) + 52) % 52;
  out.seasonality.reserve(2 * static_cast<std::size_t>(config.n_harmonics));
  for (int k = 1; k <= config.n_harmonics; ++k) {
    // Reduce k*w mod 52 first so quarter periods land on exact multiples of pi/2.
    const int phase = (k * week_of_year) % 52;
    const double angle = 2.0 * std::numbers::pi * phase / 52.0;
    double s = std::sin(angle);
    double c = std::cos(angle);
    if (phase == 0) { s = 0.0; c = 1.0; }
    else if (phase == 13) { s = 1.0; c = 0.0; }
    else if (phase == 26) { s = 0.0; c = -1.0; }
    else if (phase == 39) { s = -1.0; c = 0.0; }
    out.seasonality.push_back(s);
    out.seasonality.push_back(c);
  }
  return out;
}

namespace {
bool similar_price(double focal, double other, double band) {
  return std::abs(other - focal) <= band * focal;
}
}  // namespace

CannibalizationCounts cannibalization_features(const Catalog& catalog, const ItemMeta& item,
                                               Week week, const FeatureConfig& config) {
  CannibalizationCounts out;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const ItemMeta& other = catalog.items()[i];
    if (other.article_type != item.article_type) continue;
    bool live = false;
    for (const auto& row : catalog.series(i)) {
      if (row.week == week) {
        live = row.live;
        break;
      }
    }
    if (!live) continue;
    ++out.n_live;
    if (other.brand == item.brand) {
      ++out.n_live_same_brand;
    } else if (similar_price(item.price_point, other.price_point, config.price_band_fraction)) {
      ++out.n_live_other_brand_similar_price;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Assortment

Assortment::Assortment(std::vector<ItemMeta> items, std::vector<Span> spans,
                       const FeatureConfig& config) {
  if (items.size() != spans.size()) throw Error("assortment items/spans size mismatch");
  Week hi = 0;
  for (const auto& s : spans) hi = std::max(hi, s.last);
  const std::size_t horizon = static_cast<std::size_t>(hi) + 1;

  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& t = type_counts_[items[i].article_type];
    auto& b = brand_counts_[{items[i].article_type, items[i].brand}];
    t.resize(horizon, 0);
    b.resize(horizon, 0);
    for (Week w = std::max(0, spans[i].first); w <= spans[i].last; ++w) {
      ++t[static_cast<std::size_t>(w)];
      ++b[static_cast<std::size_t>(w)];
    }
  }

  // Other-brand similar-price counts via a price-sorted window per type.
  std::map<std::string, std::vector<std::size_t>> by_type;
  for (std::size_t i = 0; i < items.size(); ++i) by_type[items[i].article_type].push_back(i);
  for (auto& [type, members] : by_type) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return items[a].price_point < items[b].price_point;
    });
    for (std::size_t i : members) {
      PerItem entry{items[i].article_type, items[i].brand, std::vector<int>(horizon + 1, 0)};
      const double p = items[i].price_point;
      const double band = config.price_band_fraction;
      auto first = std::lower_bound(members.begin(), members.end(), p * (1.0 - band),
                                    [&](std::size_t j, double v) { return items[j].price_point < v; });
      for (auto it = first; it != members.end(); ++it) {
        const ItemMeta& other = items[*it];
        if (other.price_point > p * (1.0 + band)) break;
        if (other.brand == items[i].brand) continue;
        if (!similar_price(p, other.price_point, band)) continue;
        const Span& s = spans[*it];
        if (s.last < s.first) continue;
        ++entry.similar[static_cast<std::size_t>(std::max(0, s.first))];
        --entry.similar[static_cast<std::size_t>(s.last) + 1];
      }
      int running = 0;
      for (auto& v : entry.similar) {
        running += v;
        v = running;
      }
      entry.similar.pop_back();
      if (!index_.emplace(items[i].item_id, std::move(entry)).second) {
        throw ValidationError("duplicate item '" + items[i].item_id + "' in assortment");
      }
    }
  }
}

Assortment Assortment::from_catalog(const Catalog& catalog, const FeatureConfig& config) {
  const Catalog* one[] = {&catalog};
  return from_catalogs(one, config);
}

Assortment Assortment::from_catalogs(std::span<const Catalog* const> catalogs,
                                     const FeatureConfig& config) {
  std::vector<ItemMeta> items;
  std::vector<Span> spans;
  for (const Catalog* catalog : catalogs) {
    for (std::size_t i = 0; i < catalog->size(); ++i) {
      const ItemMeta& item = catalog->items()[i];
      items.push_back(item);
      spans.push_back({item.go_live_week, item.go_live_week + catalog->live_length(i) - 1});
    }
  }
  return Assortment(std::move(items), std::move(spans), config);
}

int Assortment::live_in_type(const std::string& type, Week week) const {
  auto it = type_counts_.find(type);
  if (it == type_counts_.end() || week < 0 || static_cast<std::size_t>(week) >= it->second.size()) {
    return 0;
  }
  return it->second[static_cast<std::size_t>(week)];
}

int Assortment::live_in_brand(const std::string& type, const std::string& brand, Week week) const {
  auto it = brand_counts_.find({type, brand});
  if (it == brand_counts_.end() || week < 0 || static_cast<std::size_t>(week) >= it->second.size()) {
    return 0;
  }
  return it->second[static_cast<std::size_t>(week)];
}

CannibalizationCounts Assortment::counts(const std::string& item_id, Week week) const {
  auto it = index_.find(item_id);
  if (it == index_.end()) throw ValidationError("item '" + item_id + "' is not in the assortment");
  const PerItem& entry = it->second;
  CannibalizationCounts out;
  out.n_live = live_in_type(entry.article_type, week);
  out.n_live_same_brand = live_in_brand(entry.article_type, entry.brand, week);
  if (week >= 0 && static_cast<std::size_t>(week) < entry.similar.size()) {
    out.n_live_other_brand_similar_price = entry.similar[static_cast<std::size_t>(week)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training statistics

namespace {
int median_of(std::vector<int> values) {
  if (values.empty()) return 0;
  auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}
}  // namespace

FeatureStats FeatureStats::fit(const Catalog& train, const Assortment& assortment) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v) { sum += v; ++n; }
    double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
  };
  struct TypeAcc {
    Acc discount, views;
    std::map<std::string, Acc> brand_discount, brand_views;
    std::vector<int> n_live, n_brand, n_other;
  };
  std::map<std::string, TypeAcc> acc;
  FeatureStats stats;
  bool first = true;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const ItemMeta& item = train.items()[i];
    stats.experiment_start_week =
        first ? item.go_live_week : std::min(stats.experiment_start_week, item.go_live_week);
    first = false;
    TypeAcc& t = acc[item.article_type];
    for (const auto& row : train.series(i)) {
      if (!row.live) continue;
      t.discount.add(row.discount_fraction);
      t.views.add(row.list_views);
      t.brand_discount[item.brand].add(row.discount_fraction);
      t.brand_views[item.brand].add(row.list_views);
      if (assortment.contains(item.item_id)) {
        auto c = assortment.counts(item.item_id, row.week);
        t.n_live.push_back(c.n_live);
        t.n_brand.push_back(c.n_live_same_brand);
        t.n_other.push_back(c.n_live_other_brand_similar_price);
      }
    }
  }
  for (auto& [type, t] : acc) {
    TypeStats s;
    s.platform_discount = t.discount.mean();
    s.platform_views = t.views.mean();
    for (const auto& [brand, a] : t.brand_discount) s.brand_discount[brand] = a.mean();
    for (const auto& [brand, a] : t.brand_views) s.brand_views[brand] = a.mean();
    s.median_counts = {median_of(std::move(t.n_live)), median_of(std::move(t.n_brand)),
                       median_of(std::move(t.n_other))};
    stats.by_type.emplace(type, std::move(s));
  }
  return stats;
}

const FeatureStats::TypeStats& FeatureStats::type(const std::string& article_type) const {
  auto it = by_type.find(article_type);
  if (it == by_type.end()) {
    throw ValidationError("no training statistics for article type '" + article_type + "'");
  }
  return it->second;
}

double FeatureStats::brand_discount(const std::string& article_type, const std::string& brand) const {
  const TypeStats& t = type(article_type);
  auto it = t.brand_discount.find(brand);
  return it == t.brand_discount.end() ? t.platform_discount : it->second;
}

double FeatureStats::brand_views(const std::string& article_type, const std::string& brand) const {
  const TypeStats& t = type(article_type);
  auto it = t.brand_views.find(brand);
  return it == t.brand_views.end() ? t.platform_views : it->second;
}

// ---------------------------------------------------------------------------
// Matrix assembly

std::vector<std::string> time_varying_feature_names(const FeatureConfig& config) {
  std::vector<std::string> names = {"disc_dev_brand",  "disc_dev_platform", "vis_ratio_brand",
                                    "vis_ratio_platform", "weeks_to_promo", "weeks_since_promo",
                                    "is_promo",        "age",               "trend"};
  for (int k = 1; k <= config.n_harmonics; ++k) {
    names.push_back("season_sin" + std::to_string(k));
    names.push_back("season_cos" + std::to_string(k));
  }
  names.push_back("n_live");
  names.push_back("n_live_same_brand");
  names.push_back("n_live_other_brand_similar_price");
  return names;
}

std::vector<std::string> matrix_columns(const AttributeEncoder& encoder,
                                        const FeatureConfig& config) {
  std::vector<std::string> columns = {"price_point"};
  columns.insert(columns.end(), encoder.column_names().begin(), encoder.column_names().end());
  for (const auto& name : time_varying_feature_names(config)) {
    columns.push_back(name);
    for (int k = 1; k <= config.lags; ++k) columns.push_back(name + "_lag" + std::to_string(k));
  }
  return columns;
}

namespace {

struct WeekInputs {
  DiscountDeviation discount;
  VisibilityRatio visibility;
  CannibalizationCounts counts;
};

void time_varying_values(const ItemMeta& item, Week week, const WeekInputs& in,
                         const PromoCalendar& promos, const FeatureConfig& config,
                         Week experiment_start, std::vector<double>& out) {
  out.clear();
  out.push_back(in.discount.from_brand);
  out.push_back(in.discount.from_platform);
  out.push_back(in.visibility.to_brand);
  out.push_back(in.visibility.to_platform);
  const PromoDistance promo = promo_features(week, promos, config.promo_horizon);
  out.push_back(promo.weeks_to_next);
  out.push_back(promo.weeks_since_last);
  out.push_back(promo.is_promo ? 1.0 : 0.0);
  const DerivedFeatures derived = derived_features(item, week, config, experiment_start);
  out.push_back(derived.age);
  out.push_back(derived.trend);
  out.insert(out.end(), derived.seasonality.begin(), derived.seasonality.end());
  out.push_back(in.counts.n_live);
  out.push_back(in.counts.n_live_same_brand);
  out.push_back(in.counts.n_live_other_brand_similar_price);
}

/// Emits rows for weeks index >= lags, given per-week time-varying vectors.
void emit_rows(const ItemMeta& item, const AttributeEncoder& encoder, const FeatureConfig& config,
               const std::vector<std::vector<double>>& per_week, const std::vector<double>& targets,
               FeatureMatrix& out) {
  const std::size_t lags = static_cast<std::size_t>(config.lags);
  if (per_week.size() <= lags) return;
  const std::size_t n_tv = per_week.front().size();
  std::vector<double> row(out.cols(), 0.0);
  row[0] = item.price_point;
  encoder.encode(item, std::span<double>(row).subspan(1, encoder.width()));
  const std::size_t tv_offset = 1 + encoder.width();
  for (std::size_t k = lags; k < per_week.size(); ++k) {
    for (std::size_t f = 0; f < n_tv; ++f) {
      for (std::size_t lag = 0; lag <= lags; ++lag) {
        row[tv_offset + f * (lags + 1) + lag] = per_week[k - lag][f];
      }
    }
    out.add_row({item.item_id, item.go_live_week + static_cast<Week>(k)}, row, targets[k]);
  }
}

}  // namespace

FeatureMatrix build_matrix(const Catalog& rows, const Assortment& assortment,
                           const AttributeEncoder& encoder, const FeatureStats& stats,
                           const FeatureConfig& config, Warnings* warnings) {
  config.validate();
  FeatureMatrix out(matrix_columns(encoder, config));
  std::vector<std::vector<double>> per_week;
  std::vector<double> targets;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ItemMeta& item = rows.items()[i];
    if (item.article_type != encoder.article_type()) {
      throw ValidationError("item '" + item.item_id + "' has article type '" + item.article_type +
                            "' but the encoder was fitted on '" + encoder.article_type() + "'");
    }
    const auto& type_stats = stats.type(item.article_type);
    const double brand_disc = stats.brand_discount(item.article_type, item.brand);
    const double brand_views = stats.brand_views(item.article_type, item.brand);
    per_week.clear();
    targets.clear();
    for (const auto& obs : rows.series(i)) {
      if (!obs.live) break;
      WeekInputs in;
      in.discount = discount_features(obs, brand_disc, type_stats.platform_discount);
      in.visibility = visibility_features(obs, brand_views, type_stats.platform_views);
      in.counts = assortment.counts(item.item_id, obs.week);
      per_week.emplace_back();
      time_varying_values(item, obs.week, in, rows.promos(), config, stats.experiment_start_week,
                          per_week.back());
      targets.push_back(static_cast<double>(obs.units_sold));
    }
    if (per_week.size() <= static_cast<std::size_t>(config.lags) && warnings != nullptr) {
      warnings->push_back("item '" + item.item_id + "' has " + std::to_string(per_week.size()) +
                          " live weeks, not enough for " + std::to_string(config.lags) +
                          " lags; it contributes no rows");
    }
    emit_rows(item, encoder, config, per_week, targets, out);
  }
  return out;
}

FeatureMatrix build_cold_start_matrix(std::span<const ItemMeta> items, int horizon,
                                      const AttributeEncoder& encoder, const FeatureStats& stats,
                                      const FeatureConfig& config,
                                      const ColdStartAssumptions& assumptions) {
  config.validate();
  if (horizon < 1) throw ValidationError("forecast horizon must be >= 1");
  FeatureMatrix out(matrix_columns(encoder, config));
  std::vector<ItemMeta> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ItemMeta& a, const ItemMeta& b) { return a.item_id < b.item_id; });
  std::vector<std::vector<double>> per_week;
  const std::vector<double> targets(static_cast<std::size_t>(config.lags + horizon), 0.0);
  for (const auto& item : sorted) {
    if (item.article_type != encoder.article_type()) {
      throw ValidationError("item '" + item.item_id + "' has article type '" + item.article_type +
                            "' but the model was trained on '" + encoder.article_type() + "'");
    }
    if (!std::isfinite(item.price_point) || item.price_point <= 0.0) {
      throw ValidationError("item '" + item.item_id + "': price_point must be positive");
    }
    WeekInputs in;
    in.discount = {assumptions.discount_deviation, assumptions.discount_deviation};
    in.visibility = {assumptions.visibility_ratio, assumptions.visibility_ratio};
    in.counts = stats.type(item.article_type).median_counts;
    per_week.clear();
    for (int k = 0; k < config.lags + horizon; ++k) {
      per_week.emplace_back();
      time_varying_values(item, item.go_live_week + k, in, assumptions.future_promos, config,
                          stats.experiment_start_week, per_week.back());
    }
    emit_rows(item, encoder, config, per_week, targets, out);
  }
  return out;
}

}  // namespace stylecast
