#include "stylecast/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "stylecast/error.hpp"
#include "stylecast/features.hpp"

namespace stylecast {

namespace {

constexpr double kReferencePrice = 1000.0;
constexpr double kReferenceViews = 100.0;
constexpr double kReferenceDiscount = 0.25;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent substream per (purpose, index).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ splitmix64(purpose)) + index));
}

enum Purpose : std::uint64_t { kBrands = 1, kAttributes, kPromos, kItemMeta, kItemWeeks };

std::string article_type_name(int k) {
  static const char* kNames[] = {"shirts", "casual_shoes", "kurtas", "tops", "tshirts"};
  if (k < 5) return kNames[k];
  return "article_" + std::to_string(k);
}

std::string padded(const char* prefix, int value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

std::discrete_distribution<int> zipf(int n, double exponent) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = 1.0 / std::pow(k + 1.0, exponent);
  return std::discrete_distribution<int>(w.begin(), w.end());
}

double round_to(double v, double step) { return std::round(v / step) * step; }

struct BrandTraits {
  double log_effect = 0.0;
  double mean_discount = 0.0;
  double log_price = 0.0;
  double log_visibility = 0.0;
};

struct ItemPlan {
  ItemMeta meta;
  int life = 0;
  double log_effect = 0.0;  // brand + attributes + price
  double discount_offset = 0.0;
  double log_visibility = 0.0;
  double brand_discount = 0.0;
};

PromoCalendar make_promos(const GenConfig& c) {
  std::vector<Week> weeks;
  constexpr int kMinSpacing = 6;
  for (int year = 0; year * 52 < c.n_weeks; ++year) {
    auto rng = substream(c.seed, kPromos, static_cast<std::uint64_t>(year));
    std::uniform_int_distribution<int> in_year(0, 51);
    std::vector<int> chosen;
    for (int tries = 0; static_cast<int>(chosen.size()) < c.promos_per_year && tries < 1000; ++tries) {
      const int w = in_year(rng);
      const bool spaced = std::all_of(chosen.begin(), chosen.end(),
                                      [&](int o) { return std::abs(o - w) >= kMinSpacing; });
      if (spaced) chosen.push_back(w);
    }
    for (int w : chosen) {
      if (year * 52 + w < c.n_weeks) weeks.push_back(year * 52 + w);
    }
  }
  return PromoCalendar(std::move(weeks));
}

}  // namespace

void GenConfig::validate() const {
  if (n_items < 1 || n_article_types < 1 || n_brands < 1 || n_colors < 1 || n_materials < 1) {
    throw ValidationError("generator counts must all be >= 1");
  }
  if (n_weeks < 8) throw ValidationError("n_weeks must be >= 8");
  if (min_life_weeks < kMinSeriesLength || max_life_weeks > kMaxSeriesLength ||
      min_life_weeks > max_life_weeks) {
    throw ValidationError("life weeks must satisfy 4 <= min_life_weeks <= max_life_weeks <= 104");
  }
  if (min_life_weeks > n_weeks) throw ValidationError("min_life_weeks exceeds n_weeks");
  if (promos_per_year < 0 || promos_per_year > 8) {
    throw ValidationError("promos_per_year must be in [0, 8]");
  }
  if (age_peak_weeks < 1) throw ValidationError("age_peak_weeks must be >= 1");
  if (!(noise_sd >= 0.0)) throw ValidationError("noise_sd must be >= 0");
  const double coefs[] = {base_log_rate,     brand_effect,     attribute_effect, price_effect,
                          discount_effect,   visibility_effect, promo_effect,    promo_dip_effect,
                          age_effect,        season_effect,    cannibalization_effect, noise_sd};
  for (double v : coefs) {
    if (!std::isfinite(v)) throw ValidationError("generator coefficients must be finite");
  }
}

double baseline_rate(const GenConfig& config) { return std::exp(config.base_log_rate); }

Catalog generate(const GenConfig& c) {
  c.validate();

  std::vector<BrandTraits> brands(static_cast<std::size_t>(c.n_brands));
  for (int b = 0; b < c.n_brands; ++b) {
    auto rng = substream(c.seed, kBrands, static_cast<std::uint64_t>(b));
    std::normal_distribution<double> normal;
    BrandTraits& t = brands[static_cast<std::size_t>(b)];
    t.log_effect = normal(rng);
    t.mean_discount = std::uniform_real_distribution<double>(0.05, 0.45)(rng);
    t.log_price = std::log(kReferencePrice) + 0.4 * normal(rng);
    t.log_visibility = 0.3 * normal(rng);
  }

  // Per-value attribute effects, shared across article types.
  std::vector<double> colour_effect(static_cast<std::size_t>(c.n_colors));
  std::vector<double> material_effect(static_cast<std::size_t>(c.n_materials));
  {
    auto rng = substream(c.seed, kAttributes, 0);
    std::normal_distribution<double> normal;
    for (auto& e : colour_effect) e = normal(rng);
    for (auto& e : material_effect) e = normal(rng);
  }

  const PromoCalendar promos = make_promos(c);

  std::vector<ItemPlan> plans(static_cast<std::size_t>(c.n_items));
  for (int i = 0; i < c.n_items; ++i) {
    auto rng = substream(c.seed, kItemMeta, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal;
    auto colour_dist = zipf(c.n_colors, 1.1);
    auto material_dist = zipf(c.n_materials, 1.0);
    ItemPlan& p = plans[static_cast<std::size_t>(i)];
    const int type = std::uniform_int_distribution<int>(0, c.n_article_types - 1)(rng);
    const int brand = std::uniform_int_distribution<int>(0, c.n_brands - 1)(rng);
    const int colour = colour_dist(rng);
    const int material = material_dist(rng);
    const BrandTraits& bt = brands[static_cast<std::size_t>(brand)];

    p.meta.item_id = padded("S", i, 6);
    p.meta.article_type = article_type_name(type);
    p.meta.brand = padded("brand_", brand, 2);
    p.meta.price_point = std::max(1.0, std::round(std::exp(bt.log_price + 0.25 * normal(rng))));
    p.meta.go_live_week =
        std::uniform_int_distribution<int>(0, c.n_weeks - c.min_life_weeks)(rng);
    p.meta.attributes["colour"] = padded("colour_", colour, 2);
    p.meta.attributes["material"] = padded("material_", material, 2);
    const int life = std::uniform_int_distribution<int>(c.min_life_weeks, c.max_life_weeks)(rng);
    p.life = std::min(life, c.n_weeks - p.meta.go_live_week);

    p.log_effect = c.brand_effect * bt.log_effect +
                   c.attribute_effect * (colour_effect[static_cast<std::size_t>(colour)] +
                                         material_effect[static_cast<std::size_t>(material)]) -
                   c.price_effect * std::log(p.meta.price_point / kReferencePrice);
    p.brand_discount = bt.mean_discount;
    p.discount_offset = 0.05 * normal(rng);
    p.log_visibility = bt.log_visibility + 0.4 * normal(rng);
  }

  // Live-week assortment drives the cannibalization term.
  std::vector<ItemMeta> metas;
  std::vector<Assortment::Span> spans;
  for (const auto& p : plans) {
    metas.push_back(p.meta);
    spans.push_back({p.meta.go_live_week, p.meta.go_live_week + p.life - 1});
  }
  const Assortment assortment(metas, spans, FeatureConfig{});
  auto crowding = [&](const ItemPlan& p, Week week) {
    const auto counts = assortment.counts(p.meta.item_id, week);
    return std::log(std::max(1, counts.n_live_same_brand)) +
           0.5 * std::log1p(counts.n_live_other_brand_similar_price);
  };
  // Centred on the catalog-wide mean so the term shifts sales between
  // crowded and quiet weeks without moving the overall level.
  double mean_crowding = 0.0;
  std::int64_t n_live_weeks = 0;
  for (const auto& p : plans) {
    for (int k = 0; k < p.life; ++k) mean_crowding += crowding(p, p.meta.go_live_week + k);
    n_live_weeks += p.life;
  }
  if (n_live_weeks > 0) mean_crowding /= static_cast<double>(n_live_weeks);

  std::vector<ObservationRow> observations;
  for (int i = 0; i < c.n_items; ++i) {
    const ItemPlan& p = plans[static_cast<std::size_t>(i)];
    auto rng = substream(c.seed, kItemWeeks, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal;
    for (int k = 0; k < p.life; ++k) {
      const Week week = p.meta.go_live_week + k;
      const bool is_promo = promos.contains(week);
      const PromoDistance dist = promo_features(week, promos, 8);
      const bool near_promo =
          !is_promo && (dist.weeks_to_next <= 2 || dist.weeks_since_last <= 2);

      double discount = p.brand_discount + p.discount_offset + 0.07 * normal(rng);
      if (is_promo) discount += 0.15;
      discount = round_to(std::clamp(discount, 0.0, 0.8), 1e-4);

      double views = kReferenceViews * std::exp(p.log_visibility + 0.3 * normal(rng));
      if (is_promo) views *= 1.8;
      views = std::round(views);

      const double age_ratio = static_cast<double>(k) / c.age_peak_weeks;
      const double season_angle = 2.0 * std::numbers::pi * (week % 52) / 52.0;

      double log_rate = c.base_log_rate + p.log_effect;
      log_rate += c.discount_effect * (discount - kReferenceDiscount);
      log_rate += c.visibility_effect * std::log1p(views / kReferenceViews);
      if (is_promo) log_rate += c.promo_effect;
      if (near_promo) log_rate -= c.promo_dip_effect;
      log_rate += c.age_effect * age_ratio * std::exp(1.0 - age_ratio);
      log_rate += c.season_effect * std::sin(season_angle);
      log_rate -= c.cannibalization_effect * (crowding(p, week) - mean_crowding);
      log_rate += c.noise_sd * normal(rng);

      const double rate = std::exp(log_rate);
      if (!std::isfinite(rate)) {
        throw ValidationError("generator intensity is not finite for item " + p.meta.item_id +
                              " week " + std::to_string(week));
      }
      ObservationRow row;
      row.item_id = p.meta.item_id;
      row.week = week;
      row.units_sold = std::poisson_distribution<std::int64_t>(rate)(rng);
      row.discount_fraction = discount;
      row.list_views = views;
      row.live = true;
      observations.push_back(std::move(row));
    }
  }
  return Catalog::validated(std::move(metas), std::move(observations), promos);
}

double skewness(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

namespace {

Histogram histogram(const std::vector<double>& values, int n_bins) {
  Histogram h;
  h.lo = *std::min_element(values.begin(), values.end());
  h.hi = *std::max_element(values.begin(), values.end());
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  const double width = (h.hi - h.lo) / n_bins;
  for (double v : values) {
    int bin = width > 0.0 ? static_cast<int>((v - h.lo) / width) : 0;
    bin = std::clamp(bin, 0, n_bins - 1);
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

}  // namespace

CatalogSummary describe(const Catalog& catalog, int n_bins) {
  if (catalog.empty()) throw ValidationError("cannot describe an empty catalog");
  if (n_bins < 1) throw ValidationError("n_bins must be >= 1");
  std::vector<double> sales, log_sales;
  struct BrandAcc {
    double discount = 0.0;
    double units = 0.0;
    std::int64_t weeks = 0;
    std::int64_t items = 0;
  };
  std::map<std::string, BrandAcc> acc;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    BrandAcc& b = acc[catalog.items()[i].brand];
    ++b.items;
    for (const auto& row : catalog.series(i)) {
      if (!row.live) continue;
      const double units = static_cast<double>(row.units_sold);
      sales.push_back(units);
      log_sales.push_back(std::log1p(units));
      b.discount += row.discount_fraction;
      b.units += units;
      ++b.weeks;
    }
  }
  if (sales.empty()) throw ValidationError("catalog has no live observations");
  CatalogSummary out;
  out.n_rows = static_cast<std::int64_t>(sales.size());
  out.sales = histogram(sales, n_bins);
  out.log_sales = histogram(log_sales, n_bins);
  out.skewness = skewness(sales);
  out.log_skewness = skewness(log_sales);
  for (const auto& [brand, b] : acc) {
    BrandSummary s;
    s.n_items = b.items;
    if (b.weeks > 0) {
      s.mean_discount = b.discount / static_cast<double>(b.weeks);
      s.rate_of_sale = b.units / static_cast<double>(b.weeks);
    }
    out.brands.emplace(brand, s);
  }
  return out;
}

}  // namespace stylecast
