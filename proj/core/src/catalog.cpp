#include "stylecast/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stylecast/error.hpp"

namespace stylecast {

PromoCalendar::PromoCalendar(std::vector<Week> weeks) : weeks_(std::move(weeks)) {
  std::sort(weeks_.begin(), weeks_.end());
  weeks_.erase(std::unique(weeks_.begin(), weeks_.end()), weeks_.end());
}

bool PromoCalendar::contains(Week week) const {
  return std::binary_search(weeks_.begin(), weeks_.end(), week);
}

std::optional<Week> PromoCalendar::next_at_or_after(Week week) const {
  auto it = std::lower_bound(weeks_.begin(), weeks_.end(), week);
  if (it == weeks_.end()) return std::nullopt;
  return *it;
}

std::optional<Week> PromoCalendar::last_at_or_before(Week week) const {
  auto it = std::upper_bound(weeks_.begin(), weeks_.end(), week);
  if (it == weeks_.begin()) return std::nullopt;
  return *std::prev(it);
}

void SplitSpec::validate() const {
  if (!(train_end_week < valid_end_week && valid_end_week < test_end_week)) {
    std::ostringstream msg;
    msg << "split boundaries must satisfy train_end < valid_end < test_end, got ("
        << train_end_week << ", " << valid_end_week << ", " << test_end_week << ")";
    throw ValidationError(msg.str());
  }
}

namespace {

[[noreturn]] void fail_item(const std::string& item_id, const std::string& what) {
  throw ValidationError("item '" + item_id + "': " + what);
}

void validate_item(const ItemMeta& item) {
  if (item.item_id.empty()) throw ValidationError("empty item_id");
  if (!std::isfinite(item.price_point) || item.price_point <= 0.0) {
    fail_item(item.item_id, "price_point must be positive and finite");
  }
  if (item.go_live_week < 0) fail_item(item.item_id, "go_live_week must be >= 0");
  for (const auto& [name, value] : item.attributes) {
    if (name.empty()) fail_item(item.item_id, "attribute with empty name");
  }
}

void validate_row(const ObservationRow& row) {
  const auto where = [&] { return "week " + std::to_string(row.week); };
  if (row.units_sold < 0) fail_item(row.item_id, where() + ": negative units_sold");
  if (!std::isfinite(row.discount_fraction) || row.discount_fraction < 0.0 ||
      row.discount_fraction > 1.0) {
    fail_item(row.item_id, where() + ": discount_fraction outside [0,1]");
  }
  if (!std::isfinite(row.list_views) || row.list_views < 0.0) {
    fail_item(row.item_id, where() + ": list_views must be non-negative");
  }
  if (!row.live && row.units_sold != 0) {
    fail_item(row.item_id, where() + ": units_sold must be 0 when not live");
  }
}

}  // namespace

Catalog Catalog::validated(std::vector<ItemMeta> items,
                           std::vector<ObservationRow> observations,
                           PromoCalendar promos) {
  std::sort(items.begin(), items.end(),
            [](const ItemMeta& a, const ItemMeta& b) { return a.item_id < b.item_id; });
  for (std::size_t i = 0; i < items.size(); ++i) {
    validate_item(items[i]);
    if (i > 0 && items[i].item_id == items[i - 1].item_id) {
      fail_item(items[i].item_id, "duplicate item_id");
    }
  }

  std::unordered_map<std::string, std::size_t> position;
  position.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) position.emplace(items[i].item_id, i);

  for (const auto& row : observations) {
    if (!position.contains(row.item_id)) {
      throw ValidationError("observation references unknown item '" + row.item_id + "'");
    }
    validate_row(row);
  }
  std::stable_sort(observations.begin(), observations.end(),
                   [](const ObservationRow& a, const ObservationRow& b) {
                     if (a.item_id != b.item_id) return a.item_id < b.item_id;
                     return a.week < b.week;
                   });

  Catalog catalog = from_sorted(std::move(items), std::move(observations), std::move(promos));

  for (std::size_t i = 0; i < catalog.items_.size(); ++i) {
    const ItemMeta& item = catalog.items_[i];
    auto rows = catalog.series(i);
    if (rows.empty()) fail_item(item.item_id, "no observations (series shorter than 4 weeks)");
    bool delisted = false;
    int live_weeks = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const ObservationRow& row = rows[k];
      if (row.week < item.go_live_week) {
        fail_item(item.item_id, "observation at week " + std::to_string(row.week) +
                                    " before go_live_week " +
                                    std::to_string(item.go_live_week));
      }
      if (k > 0 && row.week == rows[k - 1].week) {
        fail_item(item.item_id, "duplicate (item_id, week) row at week " + std::to_string(row.week));
      }
      const Week expected = item.go_live_week + static_cast<Week>(k);
      if (row.week != expected) {
        fail_item(item.item_id, "gap in series: expected week " + std::to_string(expected) +
                                    ", found " + std::to_string(row.week));
      }
      if (row.live) {
        if (delisted) {
          fail_item(item.item_id, "relisted at week " + std::to_string(row.week) +
                                      " after being delisted");
        }
        ++live_weeks;
      } else {
        delisted = true;
      }
    }
    if (live_weeks < kMinSeriesLength) {
      fail_item(item.item_id, "series of " + std::to_string(live_weeks) +
                                  " live weeks is shorter than the minimum of " +
                                  std::to_string(kMinSeriesLength));
    }
    if (live_weeks > kMaxSeriesLength) {
      fail_item(item.item_id, "series of " + std::to_string(live_weeks) +
                                  " live weeks exceeds the maximum of " +
                                  std::to_string(kMaxSeriesLength));
    }
  }
  return catalog;
}

Catalog Catalog::from_sorted(std::vector<ItemMeta> items,
                             std::vector<ObservationRow> observations,
                             PromoCalendar promos) {
  Catalog c;
  c.items_ = std::move(items);
  c.observations_ = std::move(observations);
  c.promos_ = std::move(promos);
  c.index();
  return c;
}

void Catalog::index() {
  offsets_.assign(items_.size() + 1, 0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    offsets_[i] = pos;
    while (pos < observations_.size() && observations_[pos].item_id == items_[i].item_id) ++pos;
  }
  offsets_[items_.size()] = pos;
}

std::optional<std::size_t> Catalog::find_item(const std::string& item_id) const {
  auto it = std::lower_bound(
      items_.begin(), items_.end(), item_id,
      [](const ItemMeta& item, const std::string& id) { return item.item_id < id; });
  if (it == items_.end() || it->item_id != item_id) return std::nullopt;
  return static_cast<std::size_t>(it - items_.begin());
}

std::span<const ObservationRow> Catalog::series(std::size_t index) const {
  return std::span<const ObservationRow>(observations_).subspan(
      offsets_[index], offsets_[index + 1] - offsets_[index]);
}

int Catalog::live_length(std::size_t index) const {
  int n = 0;
  for (const auto& row : series(index)) n += row.live ? 1 : 0;
  return n;
}

std::vector<std::string> Catalog::article_types() const {
  std::set<std::string> types;
  for (const auto& item : items_) types.insert(item.article_type);
  return {types.begin(), types.end()};
}

}  // namespace stylecast
