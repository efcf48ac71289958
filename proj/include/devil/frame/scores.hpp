#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"
#include "devil/frame/flow.hpp"
#include "devil/frame/phash.hpp"
#include "devil/frame/ssim.hpp"

namespace devil::frame {

namespace detail {

inline void require_pairs(std::span<const LumaFrame> frames) {
  if (frames.size() < 2) {
    throw Error(ErrorKind::TooFewFrames, "need at least 2 frames, got " + std::to_string(frames.size()));
  }
}

}  // namespace detail

/// Mean over consecutive pairs of the mean per-pixel flow magnitude, using the
/// block-matching estimator.
[[nodiscard]] inline double optical_flow_strength(std::span<const LumaFrame> frames, const BlockMatchParams& p = {}) {
  detail::require_pairs(frames);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) sum += estimate_flow(frames[i], frames[i + 1], p).mean_magnitude();
  return sum / static_cast<double>(frames.size() - 1);
}

/// Same quantity from precomputed (N-1) x H x W x 2 flow fields.
[[nodiscard]] inline double optical_flow_strength(const Tensor& flow, std::size_t frame_count, std::size_t height,
                                                  std::size_t width) {
  if (flow.rank() != 4 || flow.dim(0) + 1 != frame_count || flow.dim(1) != height || flow.dim(2) != width ||
      flow.dim(3) != 2) {
    std::string shape;
    for (auto d : flow.dims) shape += (shape.empty() ? "" : "x") + std::to_string(d);
    throw Error(ErrorKind::Inconsistency, "flow_fields shape " + shape + " does not match video " +
                                              std::to_string(frame_count - 1) + "x" + std::to_string(height) + "x" +
                                              std::to_string(width) + "x2");
  }
  const std::size_t per_frame = height * width;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < frame_count; ++i) {
    const auto f = flow.row(i);
    double frame_sum = 0.0;
    for (std::size_t px = 0; px < per_frame; ++px) {
      frame_sum += std::hypot(static_cast<double>(f[2 * px]), static_cast<double>(f[2 * px + 1]));
    }
    sum += frame_sum / static_cast<double>(per_frame);
  }
  return sum / static_cast<double>(frame_count - 1);
}

/// 1 - mean SSIM of consecutive frames. Not clamped; anti-correlated frames give values above 1.
[[nodiscard]] inline double structural_dynamics(std::span<const LumaFrame> frames, const SsimParams& p = {}) {
  detail::require_pairs(frames);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) sum += ssim(frames[i], frames[i + 1], p);
  return 1.0 - sum / static_cast<double>(frames.size() - 1);
}

/// Mean normalised Hamming distance between consecutive perceptual hashes.
[[nodiscard]] inline double perceptual_dynamics(std::span<const PerceptualHash> hashes) {
  if (hashes.size() < 2) {
    throw Error(ErrorKind::TooFewFrames, "need at least 2 hashes, got " + std::to_string(hashes.size()));
  }
  long total = 0;
  for (std::size_t i = 0; i + 1 < hashes.size(); ++i) total += hamming_distance(hashes[i], hashes[i + 1]);
  return static_cast<double>(total) / (64.0 * static_cast<double>(hashes.size() - 1));
}

[[nodiscard]] inline double perceptual_dynamics(std::span<const LumaFrame> frames) {
  detail::require_pairs(frames);
  std::vector<PerceptualHash> hashes;
  hashes.reserve(frames.size());
  for (const auto& f : frames) hashes.push_back(phash(f));
  return perceptual_dynamics(hashes);
}

}  // namespace devil::frame
