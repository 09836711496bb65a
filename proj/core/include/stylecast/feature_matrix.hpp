#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stylecast/catalog.hpp"

namespace stylecast {

struct RowKey {
  std::string item_id;
  Week week = 0;

  auto operator<=>(const RowKey&) const = default;
};

/// Dense row-major design matrix aligned to (item, week) keys, with a named
/// column schema and the raw units_sold target.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  /// Throws ValidationError on duplicate column names.
  explicit FeatureMatrix(std::vector<std::string> columns);

  /// Appends a row; `values.size()` must equal cols(). Non-finite values throw.
  void add_row(RowKey key, std::span<const double> values, double target);

  std::size_t rows() const { return keys_.size(); }
  std::size_t cols() const { return columns_.size(); }
  bool empty() const { return keys_.empty(); }

  const std::vector<RowKey>& keys() const { return keys_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& target() const { return target_; }
  std::vector<double>& mutable_target() { return target_; }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols(), cols());
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }

  std::optional<std::size_t> column_index(std::string_view name) const;

  /// Copy with rows sorted by key.
  FeatureMatrix canonical() const;
  bool is_canonical() const;

  /// Rows whose item_id satisfies `keep`, in the current order.
  template <typename Pred>
  FeatureMatrix filter_items(Pred keep) const {
    FeatureMatrix out(columns_);
    for (std::size_t r = 0; r < rows(); ++r) {
      if (keep(keys_[r].item_id)) out.add_row(keys_[r], row(r), target_[r]);
    }
    return out;
  }

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::vector<std::string> columns_;
  std::vector<RowKey> keys_;
  std::vector<double> values_;
  std::vector<double> target_;
};

}  // namespace stylecast
