#pragma once

#include "stylecast/catalog.hpp"
#include "stylecast/error.hpp"

namespace stylecast {

struct SplitResult {
  Catalog train;
  Catalog valid;
  Catalog test;
  Warnings warnings;  // one entry per empty partition
};

/// Partitions items by go-live week; each item's whole series follows it.
/// Throws ValidationError for items going live at or after test_end_week.
SplitResult split_by_go_live(const Catalog& catalog, const SplitSpec& spec);

}  // namespace stylecast
