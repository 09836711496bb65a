#include <gtest/gtest.h>

#include "stylecast/catalog.hpp"
#include "stylecast/error.hpp"
#include "test_support.hpp"

namespace stylecast {
namespace {

using testing::make_item;
using testing::make_series;

TEST(PromoCalendar, SortsAndDeduplicates) {
  PromoCalendar promos({12, 3, 12, 7});
  EXPECT_EQ(promos.weeks(), (std::vector<Week>{3, 7, 12}));
  EXPECT_TRUE(promos.contains(7));
  EXPECT_FALSE(promos.contains(8));
  EXPECT_EQ(promos.next_at_or_after(8), 12);
  EXPECT_EQ(promos.next_at_or_after(7), 7);
  EXPECT_EQ(promos.last_at_or_before(6), 3);
  EXPECT_EQ(promos.last_at_or_before(2), std::nullopt);
  EXPECT_EQ(promos.next_at_or_after(13), std::nullopt);
}

TEST(SplitSpec, RequiresIncreasingBoundaries) {
  EXPECT_NO_THROW((SplitSpec{52, 78, 104}.validate()));
  EXPECT_THROW((SplitSpec{52, 52, 104}.validate()), ValidationError);
  EXPECT_THROW((SplitSpec{80, 78, 104}.validate()), ValidationError);
}

TEST(Catalog, CanonicalizesOrder) {
  auto b = make_item("B", "x", 100, 0);
  auto a = make_item("A", "x", 100, 2);
  auto rows = make_series(b, {1, 2, 3, 4});
  auto more = make_series(a, {5, 6, 7, 8});
  std::reverse(more.begin(), more.end());
  rows.insert(rows.begin(), more.begin(), more.end());
  const Catalog c = Catalog::validated({b, a}, rows, {});
  EXPECT_EQ(c.items()[0].item_id, "A");
  ASSERT_EQ(c.series(0).size(), 4u);
  EXPECT_EQ(c.series(0)[0].week, 2);
  EXPECT_EQ(c.series(0)[3].units_sold, 8);
  EXPECT_EQ(c.live_length(1), 4);
}

TEST(Catalog, RejectsShortSeries) {
  auto a = make_item("A", "x", 100, 0);
  try {
    Catalog::validated({a}, make_series(a, {1, 2, 3}), {});
    FAIL() << "expected a too-short error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("shorter"), std::string::npos);
  }
}

TEST(Catalog, RejectsSeriesLongerThanMaximum) {
  auto a = make_item("A", "x", 100, 0);
  EXPECT_THROW(Catalog::validated({a}, make_series(a, std::vector<std::int64_t>(105, 1)), {}),
               ValidationError);
  EXPECT_NO_THROW(Catalog::validated({a}, make_series(a, std::vector<std::int64_t>(104, 1)), {}));
}

TEST(Catalog, RejectsObservationBeforeGoLive) {
  auto a = make_item("A", "x", 100, 5);
  auto rows = make_series(a, {1, 2, 3, 4});
  rows[0].week = 4;
  EXPECT_THROW(Catalog::validated({a}, rows, {}), ValidationError);
}

TEST(Catalog, RejectsDuplicateAndGaps) {
  auto a = make_item("A", "x", 100, 0);
  auto rows = make_series(a, {1, 2, 3, 4, 5});
  auto dup = rows;
  dup[2].week = 1;
  EXPECT_THROW(Catalog::validated({a}, dup, {}), ValidationError);
  auto gap = rows;
  gap[4].week = 6;
  EXPECT_THROW(Catalog::validated({a}, gap, {}), ValidationError);
}

TEST(Catalog, RejectsRelisting) {
  auto a = make_item("A", "x", 100, 0);
  auto rows = make_series(a, {1, 2, 3, 4, 5, 6});
  rows[2].live = false;
  rows[2].units_sold = 0;
  EXPECT_THROW(Catalog::validated({a}, rows, {}), ValidationError);
  // Trailing delisted weeks are fine.
  rows = make_series(a, {1, 2, 3, 4, 0});
  rows[4].live = false;
  const Catalog c = Catalog::validated({a}, rows, {});
  EXPECT_EQ(c.live_length(0), 4);
}

TEST(Catalog, RejectsInvalidFields) {
  auto a = make_item("A", "x", 100, 0);
  auto rows = make_series(a, {1, 2, 3, 4});
  auto bad = rows;
  bad[1].units_sold = -1;
  EXPECT_THROW(Catalog::validated({a}, bad, {}), ValidationError);
  bad = rows;
  bad[1].discount_fraction = 1.5;
  EXPECT_THROW(Catalog::validated({a}, bad, {}), ValidationError);
  bad = rows;
  bad[1].list_views = -3;
  EXPECT_THROW(Catalog::validated({a}, bad, {}), ValidationError);
  bad = rows;
  bad[3].live = false;  // not live but sold
  EXPECT_THROW(Catalog::validated({a}, bad, {}), ValidationError);

  auto cheap = make_item("A", "x", 0, 0);
  EXPECT_THROW(Catalog::validated({cheap}, rows, {}), ValidationError);
  auto empty_key = make_item("A", "x", 100, 0, {{"", "blue"}});
  EXPECT_THROW(Catalog::validated({empty_key}, rows, {}), ValidationError);
  EXPECT_THROW(Catalog::validated({a, a}, rows, {}), ValidationError);
  auto orphan = rows;
  orphan[0].item_id = "Z";
  EXPECT_THROW(Catalog::validated({a}, orphan, {}), ValidationError);
}

TEST(Catalog, AcceptsZeroViewsWhileLive) {
  auto a = make_item("A", "x", 100, 0);
  auto rows = make_series(a, {1, 2, 3, 4});
  for (auto& r : rows) r.list_views = 0;
  EXPECT_NO_THROW(Catalog::validated({a}, rows, {}));
}

TEST(Catalog, FilterKeepsWholeSeries) {
  const Catalog c = testing::small_catalog(3, 30);
  const Catalog early = c.filter([](const ItemMeta& item) { return item.go_live_week < 40; });
  for (std::size_t i = 0; i < early.size(); ++i) {
    auto idx = c.find_item(early.items()[i].item_id);
    ASSERT_TRUE(idx);
    const auto a = early.series(i);
    const auto b = c.series(*idx);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
  EXPECT_EQ(early.promos(), c.promos());
}

}  // namespace
}  // namespace stylecast
