#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "devil/core/error.hpp"

namespace devil::metrics {

enum class NaturalnessLevel {
  AlmostReal,
  SlightlyUnrealistic,
  ModeratelyUnrealistic,
  NoticeablyUnrealistic,
  CompletelyFictitious,
};

inline constexpr std::array<NaturalnessLevel, 5> kNaturalnessLevels = {
    NaturalnessLevel::AlmostReal, NaturalnessLevel::SlightlyUnrealistic, NaturalnessLevel::ModeratelyUnrealistic,
    NaturalnessLevel::NoticeablyUnrealistic, NaturalnessLevel::CompletelyFictitious};

constexpr std::string_view to_string(NaturalnessLevel l) {
  switch (l) {
    case NaturalnessLevel::AlmostReal: return "Almost Real";
    case NaturalnessLevel::SlightlyUnrealistic: return "Slightly Unrealistic";
    case NaturalnessLevel::ModeratelyUnrealistic: return "Moderately Unrealistic";
    case NaturalnessLevel::NoticeablyUnrealistic: return "Noticeably Unrealistic";
    case NaturalnessLevel::CompletelyFictitious: return "Completely Fictitious";
  }
  return "unknown";
}

/// 1.0, 0.75, 0.5, 0.25, 0.0 from most to least natural.
[[nodiscard]] constexpr double naturalness_level_to_score(NaturalnessLevel l) {
  switch (l) {
    case NaturalnessLevel::AlmostReal: return 1.0;
    case NaturalnessLevel::SlightlyUnrealistic: return 0.75;
    case NaturalnessLevel::ModeratelyUnrealistic: return 0.5;
    case NaturalnessLevel::NoticeablyUnrealistic: return 0.25;
    case NaturalnessLevel::CompletelyFictitious: return 0.0;
  }
  return 0.0;
}

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace detail

/// Exact (case-insensitive) level name.
[[nodiscard]] inline NaturalnessLevel parse_naturalness_level(std::string_view name) {
  const auto needle = detail::lower(name);
  for (auto l : kNaturalnessLevels) {
    if (detail::lower(to_string(l)) == needle) return l;
  }
  throw Error(ErrorKind::Parse, "unknown naturalness level '" + std::string(name) + "'");
}

[[nodiscard]] inline double naturalness_level_to_score(std::string_view name) {
  return naturalness_level_to_score(parse_naturalness_level(name));
}

/// The level name that occurs earliest in free text (case-insensitive), if any.
[[nodiscard]] inline std::optional<NaturalnessLevel> find_naturalness_level(std::string_view text) {
  const auto hay = detail::lower(text);
  std::optional<NaturalnessLevel> best;
  std::size_t best_pos = std::string::npos;
  for (auto l : kNaturalnessLevels) {
    const auto pos = hay.find(detail::lower(to_string(l)));
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best = l;
    }
  }
  return best;
}

/// Mean level score over videos.
[[nodiscard]] inline double aggregate_naturalness(std::span<const NaturalnessLevel> levels) {
  if (levels.empty()) throw Error(ErrorKind::UndefinedMetric, "no naturalness levels to aggregate");
  double sum = 0.0;
  for (auto l : levels) sum += naturalness_level_to_score(l);
  return sum / static_cast<double>(levels.size());
}

}  // namespace devil::metrics
