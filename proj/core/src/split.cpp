#include "stylecast/split.hpp"

namespace stylecast {

SplitResult split_by_go_live(const Catalog& catalog, const SplitSpec& spec) {
  spec.validate();
  for (const auto& item : catalog.items()) {
    if (item.go_live_week >= spec.test_end_week) {
      throw ValidationError("item '" + item.item_id + "' goes live at week " +
                            std::to_string(item.go_live_week) +
                            ", at or after test_end_week " + std::to_string(spec.test_end_week));
    }
  }
  SplitResult out;
  out.train = catalog.filter([&](const ItemMeta& m) { return m.go_live_week < spec.train_end_week; });
  out.valid = catalog.filter([&](const ItemMeta& m) {
    return m.go_live_week >= spec.train_end_week && m.go_live_week < spec.valid_end_week;
  });
  out.test = catalog.filter([&](const ItemMeta& m) {
    return m.go_live_week >= spec.valid_end_week && m.go_live_week < spec.test_end_week;
  });
  const auto warn_if_empty = [&](const Catalog& part, const char* name) {
    if (part.empty()) out.warnings.push_back(std::string("empty ") + name + " partition");
  };
  warn_if_empty(out.train, "train");
  warn_if_empty(out.valid, "valid");
  warn_if_empty(out.test, "test");
  return out;
}

}  // namespace stylecast
