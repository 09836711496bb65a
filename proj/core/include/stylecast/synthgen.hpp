#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stylecast/catalog.hpp"

namespace stylecast {

/// Parameters of the synthetic catalog. Weekly units follow a Poisson law
/// whose log-intensity is an additive model of the effects below; setting
/// every *_effect and noise_sd to 0 leaves exp(base_log_rate).
struct GenConfig {
  std::uint64_t seed = 42;
  int n_items = 2000;
  int n_weeks = 104;
  int n_article_types = 2;
  int n_brands = 12;
  int n_colors = 14;
  int n_materials = 6;
  int min_life_weeks = 8;
  int max_life_weeks = 52;
  int promos_per_year = 4;

  double base_log_rate = 1.5;
  double brand_effect = 0.5;            // sd of per-brand log effects
  double attribute_effect = 0.4;        // sd of per-value log effects
  double price_effect = 0.5;            // elasticity on log(price / 1000)
  double discount_effect = 3.0;         // per unit of discount deviation
  double visibility_effect = 0.8;       // on log(1 + views / 100)
  double promo_effect = 0.7;            // log spike on promo weeks
  double promo_dip_effect = 0.3;        // log dip within 2 weeks of a promo
  double age_effect = 0.8;              // height of the rise-then-decay curve
  int age_peak_weeks = 6;
  double season_effect = 0.25;          // amplitude of the annual sinusoid
  double cannibalization_effect = 0.6;  // on centred log of live same-brand styles
  double noise_sd = 0.25;               // Gaussian noise on log-intensity

  void validate() const;
};

/// Deterministic in `config`: equal configs give equal catalogs.
/// Throws ValidationError when an intensity is not finite.
Catalog generate(const GenConfig& config);

/// Expected weekly units for an item in the degenerate all-zero-effects model.
double baseline_rate(const GenConfig& config);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::int64_t> counts;
};

struct BrandSummary {
  double mean_discount = 0.0;  // over live weeks
  double rate_of_sale = 0.0;   // total units / live weeks
  std::int64_t n_items = 0;
};

struct CatalogSummary {
  Histogram sales;
  Histogram log_sales;  // of log(1 + units)
  double skewness = 0.0;
  double log_skewness = 0.0;
  std::map<std::string, BrandSummary> brands;
  std::int64_t n_rows = 0;
};

/// Statistics over live observations. Throws ValidationError when empty.
CatalogSummary describe(const Catalog& catalog, int n_bins = 20);

/// Population skewness m3 / m2^1.5; 0 for constant input.
double skewness(const std::vector<double>& values);

}  // namespace stylecast
