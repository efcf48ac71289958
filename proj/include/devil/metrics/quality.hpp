#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"
#include "devil/metrics/scored_video.hpp"

namespace devil::metrics {

/// Mean of the required quality metrics of one video.
[[nodiscard]] inline double composite_quality(const QualityRecord& record,
                                              std::span<const QualityMetric> required = kAllQualityMetrics) {
  if (required.empty()) throw Error(ErrorKind::Validation, "composite quality needs at least one metric");
  double sum = 0.0;
  for (auto m : required) {
    const auto& v = record.get(m);
    if (!v) {
      throw Error(ErrorKind::MissingInput,
                  "video '" + record.video_id + "' lacks quality metric " + std::string(to_string(m)));
    }
    sum += *v;
  }
  return sum / static_cast<double>(required.size());
}

/// Where a score that falls exactly on an interior interval edge goes.
enum class EdgeRule {
  Upward,    // [a,b) intervals, the last one closed
  Downward,  // (a,b] intervals, the first one closed
};

/// L equal intervals over [lo, hi]. Videos outside the range are ignored; with
/// include_lo == false a score equal to lo is outside too.
struct QualityBinning {
  std::size_t intervals = 12;
  double lo = 0.0;
  double hi = 1.0;
  bool include_lo = true;
  EdgeRule edge = EdgeRule::Upward;

  [[nodiscard]] bool contains(double s) const { return s <= hi && (include_lo ? s >= lo : s > lo); }

  [[nodiscard]] std::size_t index(double s) const {
    const double pos = (s - lo) * static_cast<double>(intervals) / (hi - lo);
    double idx = edge == EdgeRule::Upward ? std::floor(pos) : std::ceil(pos) - 1.0;
    idx = std::clamp(idx, 0.0, static_cast<double>(intervals - 1));
    return static_cast<std::size_t>(idx);
  }
};

inline constexpr QualityBinning kFullRangeBinning{12, 0.0, 1.0, true, EdgeRule::Upward};

/// Mean composite quality per interval; nullopt for an empty interval.
[[nodiscard]] inline std::vector<std::optional<double>> interval_means(std::span<const ScoredVideo> videos,
                                                                       const QualityBinning& b) {
  if (b.intervals < 1 || !(b.hi > b.lo)) throw Error(ErrorKind::Validation, "invalid quality binning");
  std::vector<double> sums(b.intervals, 0.0);
  std::vector<std::size_t> counts(b.intervals, 0);
  for (const auto& v : videos) {
    if (!b.contains(v.score)) continue;
    if (!v.quality) throw Error(ErrorKind::MissingInput, "video '" + v.video_id + "' has no composite quality");
    const auto i = b.index(v.score);
    sums[i] += *v.quality;
    ++counts[i];
  }
  std::vector<std::optional<double>> out(b.intervals);
  for (std::size_t i = 0; i < b.intervals; ++i) {
    if (counts[i] > 0) out[i] = sums[i] / static_cast<double>(counts[i]);
  }
  return out;
}

/// D_quality = (1/L) sum_l C_l, where C_l is the mean composite quality of the
/// videos in interval l and an empty interval contributes 0.
[[nodiscard]] inline double dynamics_based_quality(std::span<const ScoredVideo> videos,
                                                   const QualityBinning& b = kFullRangeBinning) {
  const auto means = interval_means(videos, b);
  double sum = 0.0;
  for (const auto& m : means) sum += m.value_or(0.0);
  return sum / static_cast<double>(b.intervals);
}

inline constexpr double kLowLevelTop = 0.333;
inline constexpr double kMidLevelTop = 0.667;

struct LevelQuality {
  double low = 0.0;
  double mid = 0.0;
  double high = 0.0;
};

/// D_quality restricted to the low [0, 0.333], medium (0.333, 0.667] and
/// high (0.667, 1] dynamics ranges, each with L/3 intervals.
[[nodiscard]] inline LevelQuality quality_at_levels(std::span<const ScoredVideo> videos, std::size_t intervals = 12) {
  const std::size_t per_level = std::max<std::size_t>(intervals / 3, 1);
  return {
      dynamics_based_quality(videos, {per_level, 0.0, kLowLevelTop, true, EdgeRule::Downward}),
      dynamics_based_quality(videos, {per_level, kLowLevelTop, kMidLevelTop, false, EdgeRule::Downward}),
      dynamics_based_quality(videos, {per_level, kMidLevelTop, 1.0, false, EdgeRule::Downward}),
  };
}

}  // namespace devil::metrics
