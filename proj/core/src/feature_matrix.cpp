#include "stylecast/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "stylecast/error.hpp"

namespace stylecast {

FeatureMatrix::FeatureMatrix(std::vector<std::string> columns) : columns_(std::move(columns)) {
  std::set<std::string_view> seen;
  for (const auto& name : columns_) {
    if (!seen.insert(name).second) throw ValidationError("duplicate column name '" + name + "'");
  }
}

void FeatureMatrix::add_row(RowKey key, std::span<const double> values, double target) {
  if (values.size() != cols()) {
    throw Error("row width " + std::to_string(values.size()) + " does not match schema width " +
                std::to_string(cols()));
  }
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (!std::isfinite(values[c])) {
      throw ValidationError("non-finite value in column '" + columns_[c] + "' for item '" +
                            key.item_id + "' week " + std::to_string(key.week));
    }
  }
  if (!std::isfinite(target)) throw ValidationError("non-finite target for item '" + key.item_id + "'");
  keys_.push_back(std::move(key));
  values_.insert(values_.end(), values.begin(), values.end());
  target_.push_back(target);
}

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c] == name) return c;
  }
  return std::nullopt;
}

bool FeatureMatrix::is_canonical() const {
  return std::is_sorted(keys_.begin(), keys_.end());
}

FeatureMatrix FeatureMatrix::canonical() const {
  if (is_canonical()) return *this;
  std::vector<std::size_t> order(rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys_[a] < keys_[b]; });
  FeatureMatrix out(columns_);
  out.keys_.reserve(rows());
  out.values_.reserve(values_.size());
  out.target_.reserve(rows());
  for (std::size_t r : order) out.add_row(keys_[r], row(r), target_[r]);
  return out;
}

}  // namespace stylecast
