#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/metrics/controllability.hpp"

namespace devil::metrics {

namespace detail {

inline void check_pair(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) throw Error(ErrorKind::Inconsistency, std::string(what) + ": lengths differ");
  if (x.size() < 2) throw Error(ErrorKind::UndefinedMetric, std::string(what) + " needs at least 2 samples");
}

}  // namespace detail

/// Sample Pearson correlation (two-pass).
[[nodiscard]] inline double pearson(std::span<const double> x, std::span<const double> y) {
  detail::check_pair(x, y, "pearson");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorKind::UndefinedMetric, "pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Kendall tau-b, O(n log n) (Knight's merge-sort algorithm):
///   tau_b = (n0 - n1 - n2 + n3 - 2 * discordant_swaps) / sqrt((n0 - n1)(n0 - n2))
[[nodiscard]] inline double kendall(std::span<const double> x, std::span<const double> y) {
  detail::check_pair(x, y, "kendall");
  const std::size_t n = x.size();
  std::vector<std::pair<double, double>> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {x[i], y[i]};
  std::sort(pts.begin(), pts.end());

  auto pairs = [](std::uint64_t t) { return t * (t - 1) / 2; };
  const std::uint64_t n0 = pairs(n);
  std::uint64_t ties_x = 0;
  std::uint64_t ties_xy = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pts[j].first == pts[i].first) ++j;
    ties_x += pairs(j - i);
    for (std::size_t k = i; k < j;) {
      std::size_t l = k;
      while (l < j && pts[l].second == pts[k].second) ++l;
      ties_xy += pairs(l - k);
      k = l;
    }
    i = j;
  }

  // Bottom-up merge sort on y, counting inversions.
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = pts[i].second;
  std::vector<double> buf(n);
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t a = lo;
      std::size_t b = mid;
      std::size_t o = lo;
      while (a < mid && b < hi) {
        if (ys[b] < ys[a]) {
          swaps += mid - a;
          buf[o++] = ys[b++];
        } else {
          buf[o++] = ys[a++];
        }
      }
      while (a < mid) buf[o++] = ys[a++];
      while (b < hi) buf[o++] = ys[b++];
    }
    std::swap(ys, buf);
  }
  std::uint64_t ties_y = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && ys[j] == ys[i]) ++j;
    ties_y += pairs(j - i);
    i = j;
  }

  const double denom = std::sqrt(static_cast<double>(n0 - ties_x) * static_cast<double>(n0 - ties_y));
  if (!(denom > 0.0)) throw Error(ErrorKind::UndefinedMetric, "kendall: a variable is constant");
  const double num = static_cast<double>(n0) - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                     static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
  return num / denom;
}

/// Fraction of ordered pairs with differing human grades whose predicted
/// scores are ordered the same way (strictly).
[[nodiscard]] inline double win_ratio(std::span<const double> predicted, std::span<const int> human) {
  if (predicted.size() != human.size()) throw Error(ErrorKind::Inconsistency, "win ratio: lengths differ");
  detail::check_grades(human);
  std::array<std::size_t, kMaxGrade + 1> per_grade{};
  for (int g : human) ++per_grade[static_cast<std::size_t>(g)];
  std::uint64_t eligible = 0;
  for (int g : human) eligible += human.size() - per_grade[static_cast<std::size_t>(g)];
  if (eligible == 0) throw Error(ErrorKind::UndefinedMetric, "win ratio: all human grades equal");
  const auto counts = detail::concordant_counts(human, predicted);
  const auto wins = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  return static_cast<double>(wins) / static_cast<double>(eligible);
}

}  // namespace devil::metrics
