#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "stylecast/metrics.hpp"

namespace stylecast::testing {

/// O(n^2) pair classification straight from the tau-b definition.
inline PairCounts brute_force_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  PairCounts c;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) {
        ++c.ties_both;
      } else if (dx == 0) {
        ++c.ties_x_only;
      } else if (dy == 0) {
        ++c.ties_y_only;
      } else if ((dx > 0) == (dy > 0)) {
        ++c.concordant;
      } else {
        ++c.discordant;
      }
    }
  }
  return c;
}

/// Pearson with a two-pass textbook formula in long double.
inline double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

/// Integer-valued vector of length n with values in [0, range] (ties likely
/// when range is small).
template <typename Rng>
std::vector<double> tied_vector(Rng& rng, std::size_t n, int range) {
  std::vector<double> v(n);
  std::uniform_int_distribution<int> d(0, range);
  for (auto& e : v) e = d(rng);
  return v;
}

}  // namespace stylecast::testing
