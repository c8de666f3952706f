#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "lexshift/stats.hpp"

namespace lexshift::mcmc {

namespace detail {

// Splits each chain in half (dropping the middle draw of odd-length chains).
inline std::vector<std::vector<double>> split_chains(std::span<const std::vector<double>> chains) {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) {
    std::size_t half = c.size() / 2;
    out.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    out.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  return out;
}

struct VarianceParts {
  double within = 0.0;
  double pooled = 0.0;  // var+ = (n-1)/n W + B/n
};

inline VarianceParts variance_parts(const std::vector<std::vector<double>>& chains) {
  const double n = static_cast<double>(chains.front().size());
  std::vector<double> means;
  double w = 0.0;
  for (const auto& c : chains) {
    means.push_back(stats::mean(c));
    w += stats::variance(c);
  }
  w /= static_cast<double>(chains.size());
  double b = n * stats::variance(means);
  return {w, (n - 1.0) / n * w + b / n};
}

}  // namespace detail

/// Split-R-hat. Returns 1 when every draw is identical.
[[nodiscard]] inline double split_rhat(std::span<const std::vector<double>> chains) {
  auto split = detail::split_chains(chains);
  if (split.empty() || split.front().size() < 2) return std::numeric_limits<double>::quiet_NaN();
  auto v = detail::variance_parts(split);
  if (v.within <= 0.0) return v.pooled <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(v.pooled / v.within);
}

/// Effective sample size from split chains using Geyer's initial positive
/// sequence of paired autocorrelations.
[[nodiscard]] inline double effective_sample_size(std::span<const std::vector<double>> chains) {
  auto split = detail::split_chains(chains);
  if (split.empty() || split.front().size() < 4) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t m = split.size();
  const std::size_t n = split.front().size();
  auto v = detail::variance_parts(split);
  const double total = static_cast<double>(m * n);
  if (v.pooled <= 0.0) return total;

  std::vector<std::vector<double>> centered = split;
  for (auto& c : centered) {
    double mu = stats::mean(c);
    for (double& x : c) x -= mu;
  }
  auto rho = [&](std::size_t lag) {
    double acov = 0.0;
    for (const auto& c : centered) {
      double s = 0.0;
      for (std::size_t i = 0; i + lag < n; ++i) s += c[i] * c[i + lag];
      acov += s / static_cast<double>(n);
    }
    acov /= static_cast<double>(m);
    return 1.0 - (v.within - acov) / v.pooled;
  };
  double tau = -1.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = rho(2 * k) + rho(2 * k + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  return total / std::max(tau, 1.0 / std::log10(total));
}

}  // namespace lexshift::mcmc
