#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "stylecast/error.hpp"
#include "stylecast/split.hpp"
#include "test_support.hpp"

namespace stylecast {
namespace {

using testing::make_item;
using testing::make_series;

Catalog catalog_with_go_live(const std::vector<Week>& weeks) {
  std::vector<ItemMeta> items;
  std::vector<ObservationRow> rows;
  for (std::size_t i = 0; i < weeks.size(); ++i) {
    items.push_back(make_item("I" + std::to_string(i), "b", 100, weeks[i]));
    auto s = make_series(items.back(), {1, 2, 3, 4, 5});
    rows.insert(rows.end(), s.begin(), s.end());
  }
  return Catalog::validated(items, rows, {});
}

std::set<std::string> ids(const Catalog& c) {
  std::set<std::string> out;
  for (const auto& item : c.items()) out.insert(item.item_id);
  return out;
}

TEST(SplitByGoLive, OneItemPerPartition) {
  const auto split = split_by_go_live(catalog_with_go_live({10, 60, 80}), {52, 78, 104});
  EXPECT_EQ(split.train.size(), 1u);
  EXPECT_EQ(split.valid.size(), 1u);
  EXPECT_EQ(split.test.size(), 1u);
  EXPECT_TRUE(split.warnings.empty());
  EXPECT_EQ(split.test.items()[0].go_live_week, 80);
  EXPECT_EQ(split.test.series(0).size(), 5u);
}

TEST(SplitByGoLive, EmptyPartitionsWarn) {
  const auto split = split_by_go_live(catalog_with_go_live({0, 0, 0}), {52, 78, 104});
  EXPECT_EQ(split.train.size(), 3u);
  EXPECT_TRUE(split.valid.empty());
  EXPECT_TRUE(split.test.empty());
  EXPECT_EQ(split.warnings.size(), 2u);
}

TEST(SplitByGoLive, BoundariesAreExclusive) {
  const auto split = split_by_go_live(catalog_with_go_live({51, 52, 77, 78, 103}), {52, 78, 104});
  EXPECT_EQ(ids(split.train), (std::set<std::string>{"I0"}));
  EXPECT_EQ(ids(split.valid), (std::set<std::string>{"I1", "I2"}));
  EXPECT_EQ(ids(split.test), (std::set<std::string>{"I3", "I4"}));
}

TEST(SplitByGoLive, RejectsItemsAfterTestEnd) {
  EXPECT_THROW(split_by_go_live(catalog_with_go_live({10, 104}), {52, 78, 104}), ValidationError);
}

TEST(SplitByGoLive, IsAPartitionIndependentOfOrderAndSales) {
  const Catalog c = testing::small_catalog(5, 80);
  const auto split = split_by_go_live(c, {30, 50, 104});
  std::set<std::string> all;
  std::size_t total = 0;
  for (const Catalog* part : {&split.train, &split.valid, &split.test}) {
    auto s = ids(*part);
    total += s.size();
    all.insert(s.begin(), s.end());
  }
  EXPECT_EQ(total, c.size());
  EXPECT_EQ(all, ids(c));

  // Shuffled input order and perturbed sales give the same partitions.
  std::vector<ItemMeta> items = c.items();
  std::vector<ObservationRow> rows = c.observations();
  std::reverse(items.begin(), items.end());
  std::reverse(rows.begin(), rows.end());
  for (auto& r : rows) {
    if (r.live) r.units_sold = r.units_sold * 3 + 1;
  }
  const auto other = split_by_go_live(Catalog::validated(items, rows, c.promos()), {30, 50, 104});
  EXPECT_EQ(ids(other.train), ids(split.train));
  EXPECT_EQ(ids(other.valid), ids(split.valid));
  EXPECT_EQ(ids(other.test), ids(split.test));
}

}  // namespace
}  // namespace stylecast
