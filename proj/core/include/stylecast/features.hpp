#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stylecast/catalog.hpp"
#include "stylecast/error.hpp"
#include "stylecast/feature_matrix.hpp"

namespace stylecast {

struct FeatureConfig {
  int lags = 4;                        // p
  int n_harmonics = 3;                 // sin/cos pairs of week-of-year
  double price_band_fraction = 0.2;    // "similar price" half-width
  double rare_threshold = 0.01;        // values with frequency < this pool to RARE
  int promo_horizon = 8;               // clamp for promo distances, in weeks

  void validate() const;
};

inline constexpr const char* kRareValue = "__RARE__";

/// One-hot encoding of brand and item attributes, fitted on the training
/// items of a single article type. Columns are ordered lexicographically by
/// block ("attr:<name>" blocks, then "brand"), retained values sorted inside a
/// block, and the RARE column last in each block.
class AttributeEncoder {
 public:
  struct Block {
    std::string name;                   // "attr:colour" or "brand"
    std::vector<std::string> retained;  // sorted
  };

  AttributeEncoder() = default;
  AttributeEncoder(std::string article_type, std::vector<Block> blocks);

  const std::string& article_type() const { return article_type_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<std::string>& column_names() const { return columns_; }
  std::size_t width() const { return columns_.size(); }

  /// Writes width() indicator values; exactly one 1 per block.
  void encode(const ItemMeta& item, std::span<double> out) const;

  bool operator==(const AttributeEncoder& other) const {
    return article_type_ == other.article_type_ && columns_ == other.columns_;
  }

 private:
  std::string article_type_;
  std::vector<Block> blocks_;
  std::vector<std::string> columns_;
};

/// Fits the encoder on training items (one article type). Throws
/// ValidationError on empty input or mixed article types.
AttributeEncoder fit_encoder(std::span<const ItemMeta> train_items, const FeatureConfig& config);

struct DiscountDeviation {
  double from_brand = 0.0;
  double from_platform = 0.0;
};
DiscountDeviation discount_features(const ObservationRow& obs, double brand_mean,
                                    double platform_mean);

struct VisibilityRatio {
  double to_brand = 1.0;
  double to_platform = 1.0;
};
/// A zero mean yields ratio 1.
VisibilityRatio visibility_features(const ObservationRow& obs, double brand_mean_views,
                                    double platform_mean_views);

struct PromoDistance {
  int weeks_to_next = 0;
  int weeks_since_last = 0;
  bool is_promo = false;
};
PromoDistance promo_features(Week week, const PromoCalendar& promos, int horizon = 8);

struct DerivedFeatures {
  int age = 0;
  int trend = 0;
  std::vector<double> seasonality;  // sin1, cos1, sin2, cos2, ...
};
/// Throws ValidationError when week < item.go_live_week.
DerivedFeatures derived_features(const ItemMeta& item, Week week, const FeatureConfig& config,
                                 Week experiment_start_week);

struct CannibalizationCounts {
  int n_live = 0;
  int n_live_same_brand = 0;
  int n_live_other_brand_similar_price = 0;

  bool operator==(const CannibalizationCounts&) const = default;
};

/// Direct count over `catalog` items of the same article type live in `week`.
CannibalizationCounts cannibalization_features(const Catalog& catalog, const ItemMeta& item,
                                               Week week, const FeatureConfig& config);

/// Live-week spans of an assortment, indexed for fast per-week counting.
/// Built from item metadata and live flags only; never reads sales.
class Assortment {
 public:
  struct Span {
    Week first = 0;
    Week last = -1;  // inclusive; last < first means never live
  };

  Assortment() = default;
  Assortment(std::vector<ItemMeta> items, std::vector<Span> spans, const FeatureConfig& config);
  static Assortment from_catalog(const Catalog& catalog, const FeatureConfig& config);
  /// Union of several catalogs (e.g. train, valid and test partitions).
  static Assortment from_catalogs(std::span<const Catalog* const> catalogs,
                                  const FeatureConfig& config);

  /// Counts for an assortment member; the item counts itself when live.
  CannibalizationCounts counts(const std::string& item_id, Week week) const;
  bool contains(const std::string& item_id) const { return index_.contains(item_id); }

 private:
  struct PerItem {
    std::string article_type;
    std::string brand;
    std::vector<int> similar;            // other-brand similar-price live counts by week
  };
  int live_in_type(const std::string& type, Week week) const;
  int live_in_brand(const std::string& type, const std::string& brand, Week week) const;

  std::map<std::string, PerItem> index_;
  std::map<std::string, std::vector<int>> type_counts_;
  std::map<std::pair<std::string, std::string>, std::vector<int>> brand_counts_;
};

/// Means over live training observations, per article type, plus the
/// cold-start medians of the cannibalization counts.
struct FeatureStats {
  struct TypeStats {
    double platform_discount = 0.0;
    double platform_views = 0.0;
    std::map<std::string, double> brand_discount;
    std::map<std::string, double> brand_views;
    CannibalizationCounts median_counts;
  };

  std::map<std::string, TypeStats> by_type;
  Week experiment_start_week = 0;

  static FeatureStats fit(const Catalog& train, const Assortment& assortment);

  const TypeStats& type(const std::string& article_type) const;
  double brand_discount(const std::string& article_type, const std::string& brand) const;
  double brand_views(const std::string& article_type, const std::string& brand) const;
};

/// Names of the time-varying features, before lag suffixes.
std::vector<std::string> time_varying_feature_names(const FeatureConfig& config);

/// Full column schema: price_point, one-hot columns, then each time-varying
/// feature followed by its `<name>_lag<k>` copies.
std::vector<std::string> matrix_columns(const AttributeEncoder& encoder,
                                        const FeatureConfig& config);

/// One row per live (item, week) with week >= go_live_week + lags, sorted by
/// (item_id, week). Items of `rows` must all share the encoder's article type.
FeatureMatrix build_matrix(const Catalog& rows, const Assortment& assortment,
                           const AttributeEncoder& encoder, const FeatureStats& stats,
                           const FeatureConfig& config, Warnings* warnings = nullptr);

/// Merchandising assumptions for items with no history.
struct ColdStartAssumptions {
  PromoCalendar future_promos;  // empty when unknown
  double discount_deviation = 0.0;
  double visibility_ratio = 1.0;
};

/// Feature rows for unseen items: weeks go_live_week + lags ...
/// go_live_week + lags + horizon - 1. Target is 0.
FeatureMatrix build_cold_start_matrix(std::span<const ItemMeta> items, int horizon,
                                      const AttributeEncoder& encoder, const FeatureStats& stats,
                                      const FeatureConfig& config,
                                      const ColdStartAssumptions& assumptions);

}  // namespace stylecast
