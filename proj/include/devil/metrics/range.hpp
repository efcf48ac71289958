#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "devil/core/error.hpp"

namespace devil::metrics {

/// Linear-interpolated percentile at rank p * (n - 1) of the sorted sample.
[[nodiscard]] inline double percentile(std::span<const double> scores, double p) {
  if (scores.empty()) throw Error(ErrorKind::Validation, "percentile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::Validation, "percentile p must be in [0,1]");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline constexpr double kRangeUpper = 0.99;
inline constexpr double kRangeLower = 0.01;

/// Spread between the 99th and 1st percentile of the dynamics scores.
[[nodiscard]] inline double dynamics_range(std::span<const double> scores) {
  if (scores.size() < 2) throw Error(ErrorKind::Validation, "dynamics range needs at least 2 scores");
  return percentile(scores, kRangeUpper) - percentile(scores, kRangeLower);
}

}  // namespace devil::metrics
