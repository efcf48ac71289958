#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"
#include "devil/metrics/scored_video.hpp"

namespace devil::metrics {

namespace detail {

/// Per-video count of cross-grade partners ranked consistently with the grades,
/// i.e. #{j : G_j != G_i and (S_i - S_j)(G_i - G_j) > 0}. O(M log M) via one
/// sorted score list per grade.
inline std::vector<std::size_t> concordant_counts(std::span<const int> grades, std::span<const double> scores) {
  std::array<std::vector<double>, kMaxGrade + 1> by_grade;
  for (std::size_t i = 0; i < grades.size(); ++i) by_grade[static_cast<std::size_t>(grades[i])].push_back(scores[i]);
  for (auto& v : by_grade) std::sort(v.begin(), v.end());

  std::vector<std::size_t> counts(grades.size(), 0);
  for (std::size_t i = 0; i < grades.size(); ++i) {
    std::size_t c = 0;
    for (int g = kMinGrade; g <= kMaxGrade; ++g) {
      const auto& v = by_grade[static_cast<std::size_t>(g)];
      if (g < grades[i]) {
        c += static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), scores[i]) - v.begin());
      } else if (g > grades[i]) {
        c += static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), scores[i]));
      }
    }
    counts[i] = c;
  }
  return counts;
}

inline void check_grades(std::span<const int> grades) {
  for (int g : grades) {
    if (!is_valid_grade(g)) throw Error(ErrorKind::Validation, "grade " + std::to_string(g) + " outside 1..5");
  }
}

}  // namespace detail

/// D_control = 1/M * sum_i 1/(M - M_i) * #{j : G_j != G_i, (S_i - S_j)(G_i - G_j) > 0},
/// with M_i the number of videos sharing grade G_i. Score ties count as inconsistent.
[[nodiscard]] inline double dynamics_controllability(std::span<const int> grades, std::span<const double> scores) {
  if (grades.size() != scores.size()) throw Error(ErrorKind::Inconsistency, "grades and scores differ in length");
  if (grades.size() < 2) throw Error(ErrorKind::UndefinedMetric, "dynamics controllability needs at least 2 videos");
  detail::check_grades(grades);
  std::array<std::size_t, kMaxGrade + 1> per_grade{};
  for (int g : grades) ++per_grade[static_cast<std::size_t>(g)];
  if (std::count_if(per_grade.begin(), per_grade.end(), [](std::size_t c) { return c > 0; }) < 2) {
    throw Error(ErrorKind::UndefinedMetric, "dynamics controllability needs at least two distinct grades");
  }
  const auto counts = detail::concordant_counts(grades, scores);
  const std::size_t m = grades.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t others = m - per_grade[static_cast<std::size_t>(grades[i])];
    total += static_cast<double>(counts[i]) / static_cast<double>(others);
  }
  return total / static_cast<double>(m);
}

[[nodiscard]] inline double dynamics_controllability(std::span<const ScoredVideo> videos) {
  std::vector<int> grades;
  std::vector<double> scores;
  for (const auto& v : videos) {
    grades.push_back(v.grade);
    scores.push_back(v.score);
  }
  return dynamics_controllability(grades, scores);
}

}  // namespace devil::metrics
