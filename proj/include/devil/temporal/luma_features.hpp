#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"
#include "devil/temporal/similarity.hpp"

// Raw-luma stand-ins for the learned features, used when a video has no
// DEVB section for them. Values are offset to (l+1)/256 so no vector is zero.

namespace devil::temporal {

inline constexpr double kSegmentRatio = 0.25;
inline constexpr std::size_t kSegmentCount = 4;  // floor(1 / kSegmentRatio)

namespace detail {

// Mean of luma over [x0,x1) x [y0,y1); empty ranges fall back to the nearest pixel.
inline double area_mean(const LumaFrame& f, std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1) {
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  x1 = std::min(x1, f.width);
  y1 = std::min(y1, f.height);
  x0 = std::min(x0, x1 - 1);
  y0 = std::min(y0, y1 - 1);
  double sum = 0.0;
  for (std::size_t y = y0; y < y1; ++y) {
    for (std::size_t x = x0; x < x1; ++x) sum += f.at(x, y);
  }
  return sum / static_cast<double>((x1 - x0) * (y1 - y0));
}

inline double offset_unit(double luma) { return (luma + 1.0) / 256.0; }

// side x side thumbnail of the region [x0,x1) x [y0,y1).
inline void thumbnail(const LumaFrame& f, std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1,
                      std::size_t side, std::span<double> out) {
  const std::size_t w = x1 - x0;
  const std::size_t h = y1 - y0;
  for (std::size_t ty = 0; ty < side; ++ty) {
    for (std::size_t tx = 0; tx < side; ++tx) {
      out[ty * side + tx] = offset_unit(area_mean(f, x0 + tx * w / side, x0 + (tx + 1) * w / side,
                                                  y0 + ty * h / side, y0 + (ty + 1) * h / side));
    }
  }
}

}  // namespace detail

inline constexpr std::size_t kLumaGrid = 8;
inline constexpr std::size_t kLumaCellSide = 4;

/// N x 8 x 8 x 16 patch tensor: each grid cell described by its 4x4 luma thumbnail.
[[nodiscard]] inline Tensor luma_patch_grid(std::span<const LumaFrame> frames) {
  if (frames.empty()) throw Error(ErrorKind::TooFewFrames, "no frames");
  const auto& f0 = frames.front();
  constexpr std::size_t c = kLumaCellSide * kLumaCellSide;
  Tensor t({static_cast<std::uint32_t>(frames.size()), kLumaGrid, kLumaGrid, c});
  std::vector<double> cell(c);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    for (std::size_t gy = 0; gy < kLumaGrid; ++gy) {
      for (std::size_t gx = 0; gx < kLumaGrid; ++gx) {
        detail::thumbnail(frames[i], gx * f0.width / kLumaGrid, (gx + 1) * f0.width / kLumaGrid,
                          gy * f0.height / kLumaGrid, (gy + 1) * f0.height / kLumaGrid, kLumaCellSide, cell);
        const std::size_t base = ((i * kLumaGrid + gy) * kLumaGrid + gx) * c;
        for (std::size_t j = 0; j < c; ++j) t.data[base + j] = static_cast<float>(cell[j]);
      }
    }
  }
  return t;
}

inline constexpr std::size_t kLumaEmbeddingSide = 16;

/// N x 256 frame embeddings: 16x16 luma thumbnails.
[[nodiscard]] inline FeatureRows luma_frame_embeddings(std::span<const LumaFrame> frames) {
  constexpr std::size_t c = kLumaEmbeddingSide * kLumaEmbeddingSide;
  FeatureRows out(frames.size(), c);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    detail::thumbnail(frames[i], 0, frames[i].width, 0, frames[i].height, kLumaEmbeddingSide, out.row(i));
  }
  return out;
}

inline constexpr std::size_t kLumaSegmentSide = 8;

/// Four consecutive segments of floor(N/4) frames (trailing frames dropped);
/// each segment embedding is the concatenation of its frames' 8x8 thumbnails.
[[nodiscard]] inline FeatureRows luma_segment_embeddings(std::span<const LumaFrame> frames) {
  const auto seg_len = static_cast<std::size_t>(kSegmentRatio * static_cast<double>(frames.size()));
  if (seg_len < 1) throw Error(ErrorKind::TooFewFrames, "need at least 4 frames to form segments");
  constexpr std::size_t per_frame = kLumaSegmentSide * kLumaSegmentSide;
  FeatureRows out(kSegmentCount, seg_len * per_frame);
  for (std::size_t s = 0; s < kSegmentCount; ++s) {
    auto row = out.row(s);
    for (std::size_t j = 0; j < seg_len; ++j) {
      const auto& f = frames[s * seg_len + j];
      detail::thumbnail(f, 0, f.width, 0, f.height, kLumaSegmentSide, row.subspan(j * per_frame, per_frame));
    }
  }
  return out;
}

}  // namespace devil::temporal
