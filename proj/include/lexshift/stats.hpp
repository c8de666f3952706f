#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "lexshift/common.hpp"

namespace lexshift::stats {

/// Linear-interpolation quantile (Hyndman-Fan type 7) of already sorted data.
[[nodiscard]] inline double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw InvalidInput("quantile of empty sample");
  double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

[[nodiscard]] inline double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidInput("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

[[nodiscard]] inline double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

/// Shortest interval containing `mass` of the sorted draws.
[[nodiscard]] inline std::pair<double, double> hdi_sorted(std::span<const double> sorted, double mass = 0.95) {
  if (sorted.empty()) throw InvalidInput("HDI of empty sample");
  const std::size_t n = sorted.size();
  auto width = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n)));
  width = std::clamp<std::size_t>(width, 1, n);
  std::size_t best = 0;
  double best_len = sorted[width - 1] - sorted[0];
  for (std::size_t i = 1; i + width <= n; ++i) {
    double len = sorted[i + width - 1] - sorted[i];
    if (len < best_len) {
      best_len = len;
      best = i;
    }
  }
  return {sorted[best], sorted[best + width - 1]};
}

}  // namespace lexshift::stats
