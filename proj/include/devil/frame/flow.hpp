#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"

namespace devil::frame {

struct FlowVector {
  float dx = 0.0F;
  float dy = 0.0F;
  bool operator==(const FlowVector&) const = default;
};

/// Dense H x W displacement field, pixels per frame step.
struct FlowField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<FlowVector> v;

  FlowField() = default;
  FlowField(std::size_t w, std::size_t h) : width(w), height(h), v(w * h) {}

  [[nodiscard]] const FlowVector& at(std::size_t x, std::size_t y) const { return v[y * width + x]; }
  [[nodiscard]] FlowVector& at(std::size_t x, std::size_t y) { return v[y * width + x]; }

  /// Mean per-pixel magnitude sqrt(dx^2 + dy^2).
  [[nodiscard]] double mean_magnitude() const {
    double sum = 0.0;
    for (const auto& f : v) sum += std::hypot(static_cast<double>(f.dx), static_cast<double>(f.dy));
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
  }
};

struct BlockMatchParams {
  int block = 16;
  int search_radius = 8;
  int step = 8;
};

namespace detail {

struct BlockCost {
  std::uint64_t sad = 0;
  std::uint64_t count = 0;
};

// Cost is SAD over the part of the displaced block that stays inside the
// frame, compared as SAD/count. Cross-multiplication keeps the comparison exact.
inline bool cheaper(const BlockCost& a, const BlockCost& b) { return a.sad * b.count < b.sad * a.count; }
inline bool same_cost(const BlockCost& a, const BlockCost& b) { return a.sad * b.count == b.sad * a.count; }

// Tie-break order: smaller |dx|+|dy|, then smaller dy, then smaller dx.
inline bool preferred(int dx, int dy, int best_dx, int best_dy) {
  const int l1 = std::abs(dx) + std::abs(dy);
  const int best_l1 = std::abs(best_dx) + std::abs(best_dy);
  if (l1 != best_l1) return l1 < best_l1;
  if (dy != best_dy) return dy < best_dy;
  return dx < best_dx;
}

inline std::vector<int> block_origins(int extent, int block, int step) {
  std::vector<int> origins;
  for (int o = 0; o + block <= extent; o += step) origins.push_back(o);
  if (origins.empty() || origins.back() + block < extent) origins.push_back(extent - block);
  return origins;
}

// Nearest block centre for each pixel coordinate along one axis.
inline std::vector<std::size_t> nearest_block(int extent, const std::vector<int>& origins, int block) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(extent));
  for (int p = 0; p < extent; ++p) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t b = 0; b < origins.size(); ++b) {
      const double centre = origins[b] + (block - 1) / 2.0;
      const double d = std::abs(p - centre);
      if (d < best_d) {
        best_d = d;
        best = b;
      }
    }
    idx[static_cast<std::size_t>(p)] = best;
  }
  return idx;
}

}  // namespace detail

/// Integer block-matching flow from `a` to `b` on luma: for each block of `a`,
/// the displacement (dx,dy) within the search radius minimising the mean
/// absolute difference against `b`, upsampled to pixels by nearest block.
[[nodiscard]] inline FlowField estimate_flow(const LumaFrame& a, const LumaFrame& b, const BlockMatchParams& p = {}) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorKind::Inconsistency, "flow frames differ in size");
  }
  const int w = static_cast<int>(a.width);
  const int h = static_cast<int>(a.height);
  if (w < p.block || h < p.block) {
    throw Error(ErrorKind::Validation, "frame smaller than the flow block size");
  }
  const auto xs = detail::block_origins(w, p.block, p.step);
  const auto ys = detail::block_origins(h, p.block, p.step);
  std::vector<FlowVector> block_flow(xs.size() * ys.size());

  for (std::size_t by = 0; by < ys.size(); ++by) {
    for (std::size_t bx = 0; bx < xs.size(); ++bx) {
      const int x0 = xs[bx];
      const int y0 = ys[by];
      detail::BlockCost best{};
      int best_dx = 0;
      int best_dy = 0;
      bool have = false;
      for (int dy = -p.search_radius; dy <= p.search_radius; ++dy) {
        for (int dx = -p.search_radius; dx <= p.search_radius; ++dx) {
          const int ylo = std::max(y0, -dy);
          const int yhi = std::min(y0 + p.block, h - dy);
          const int xlo = std::max(x0, -dx);
          const int xhi = std::min(x0 + p.block, w - dx);
          if (ylo >= yhi || xlo >= xhi) continue;
          detail::BlockCost c{0, static_cast<std::uint64_t>((yhi - ylo) * (xhi - xlo))};
          for (int y = ylo; y < yhi; ++y) {
            const std::uint8_t* ra = a.px.data() + static_cast<std::ptrdiff_t>(y) * w + xlo;
            const std::uint8_t* rb = b.px.data() + static_cast<std::ptrdiff_t>(y + dy) * w + xlo + dx;
            std::uint32_t row = 0;
            for (int i = 0; i < xhi - xlo; ++i) row += static_cast<std::uint32_t>(std::abs(int{ra[i]} - int{rb[i]}));
            c.sad += row;
          }
          if (!have || detail::cheaper(c, best) ||
              (detail::same_cost(c, best) && detail::preferred(dx, dy, best_dx, best_dy))) {
            best = c;
            best_dx = dx;
            best_dy = dy;
            have = true;
          }
        }
      }
      block_flow[by * xs.size() + bx] = {static_cast<float>(best_dx), static_cast<float>(best_dy)};
    }
  }

  const auto col = detail::nearest_block(w, xs, p.block);
  const auto row = detail::nearest_block(h, ys, p.block);
  FlowField field(a.width, a.height);
  for (std::size_t y = 0; y < a.height; ++y) {
    for (std::size_t x = 0; x < a.width; ++x) field.at(x, y) = block_flow[row[y] * xs.size() + col[x]];
  }
  return field;
}

}  // namespace devil::frame
