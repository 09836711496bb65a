#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stylecast {

using Week = int;

/// Static description of a style.
struct ItemMeta {
  std::string item_id;
  std::string article_type;
  std::string brand;
  double price_point = 0.0;
  Week go_live_week = 0;
  std::map<std::string, std::string> attributes;

  bool operator==(const ItemMeta&) const = default;
};

/// One (item, week) record.
struct ObservationRow {
  std::string item_id;
  Week week = 0;
  std::int64_t units_sold = 0;
  double discount_fraction = 0.0;
  double list_views = 0.0;
  bool live = true;

  bool operator==(const ObservationRow&) const = default;
};

class PromoCalendar {
 public:
  PromoCalendar() = default;
  /// Sorts and de-duplicates.
  explicit PromoCalendar(std::vector<Week> weeks);

  const std::vector<Week>& weeks() const { return weeks_; }
  bool contains(Week week) const;
  bool empty() const { return weeks_.empty(); }

  /// First promo week >= week, if any.
  std::optional<Week> next_at_or_after(Week week) const;
  /// Last promo week <= week, if any.
  std::optional<Week> last_at_or_before(Week week) const;

  bool operator==(const PromoCalendar&) const = default;

 private:
  std::vector<Week> weeks_;
};

/// Week boundaries for the go-live split. An item belongs to train when
/// go_live_week < train_end_week, to valid when it goes live before
/// valid_end_week, and to test when it goes live before test_end_week.
struct SplitSpec {
  Week train_end_week = 52;
  Week valid_end_week = 78;
  Week test_end_week = 104;

  void validate() const;
};

inline constexpr int kMinSeriesLength = 4;
inline constexpr int kMaxSeriesLength = 104;

/// Validated, immutable collection of items, their weekly observations and
/// the promo calendar. Items are kept sorted by item_id and observations by
/// (item_id, week).
class Catalog {
 public:
  Catalog() = default;

  /// Validates every invariant and returns the canonicalized catalog.
  /// Throws ValidationError naming the offending item or row.
  static Catalog validated(std::vector<ItemMeta> items,
                           std::vector<ObservationRow> observations,
                           PromoCalendar promos);

  const std::vector<ItemMeta>& items() const { return items_; }
  const std::vector<ObservationRow>& observations() const { return observations_; }
  const PromoCalendar& promos() const { return promos_; }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  std::optional<std::size_t> find_item(const std::string& item_id) const;

  /// All observation rows of the item at position `index`, ordered by week.
  std::span<const ObservationRow> series(std::size_t index) const;
  /// Number of live weeks of the item at position `index`.
  int live_length(std::size_t index) const;

  /// Catalog restricted to the items accepted by `keep`. Promos are shared.
  template <typename Pred>
  Catalog filter(Pred keep) const {
    std::vector<ItemMeta> items;
    std::vector<ObservationRow> obs;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (!keep(items_[i])) continue;
      items.push_back(items_[i]);
      auto s = series(i);
      obs.insert(obs.end(), s.begin(), s.end());
    }
    return from_sorted(std::move(items), std::move(obs), promos_);
  }

  /// Sorted, unique article types present.
  std::vector<std::string> article_types() const;

  bool operator==(const Catalog& other) const {
    return items_ == other.items_ && observations_ == other.observations_ &&
           promos_ == other.promos_;
  }

 private:
  static Catalog from_sorted(std::vector<ItemMeta> items,
                             std::vector<ObservationRow> observations,
                             PromoCalendar promos);
  void index();

  std::vector<ItemMeta> items_;
  std::vector<ObservationRow> observations_;
  PromoCalendar promos_;
  std::vector<std::size_t> offsets_;  // items_.size() + 1 entries
};

}  // namespace stylecast
