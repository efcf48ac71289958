#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "devil/core/types.hpp"

namespace devil::frame {

/// 64-bit DCT-sign fingerprint. Bit k (row-major over the 8x8 low-frequency
/// block) is set iff coefficient k exceeds the median of the 63 AC coefficients.
struct PerceptualHash {
  std::uint64_t bits = 0;
  bool operator==(const PerceptualHash&) const = default;
};

[[nodiscard]] inline int hamming_distance(PerceptualHash a, PerceptualHash b) {
  return std::popcount(a.bits ^ b.bits);
}

inline constexpr std::size_t kHashResize = 32;
inline constexpr std::size_t kHashBlock = 8;

namespace detail {

/// Bilinear resize with half-pixel-aligned sample positions, clamped at the borders.
inline std::vector<double> resize_bilinear(const LumaFrame& f, std::size_t ow, std::size_t oh) {
  auto taps = [](std::size_t in, std::size_t out) {
    std::vector<std::pair<std::size_t, double>> t(out);
    const double scale = static_cast<double>(in) / static_cast<double>(out);
    for (std::size_t o = 0; o < out; ++o) {
      double pos = (static_cast<double>(o) + 0.5) * scale - 0.5;
      auto i0 = static_cast<std::ptrdiff_t>(std::floor(pos));
      double frac = pos - static_cast<double>(i0);
      if (i0 < 0) {
        i0 = 0;
        frac = 0.0;
      }
      if (i0 >= static_cast<std::ptrdiff_t>(in) - 1) {
        i0 = static_cast<std::ptrdiff_t>(in) - 1;
        frac = 0.0;
      }
      t[o] = {static_cast<std::size_t>(i0), frac};
    }
    return t;
  };
  const auto tx = taps(f.width, ow);
  const auto ty = taps(f.height, oh);
  auto sample = [&f](std::size_t x, std::size_t y) { return static_cast<double>(f.at(x, y)); };
  std::vector<double> out(ow * oh);
  for (std::size_t y = 0; y < oh; ++y) {
    const auto [y0, fy] = ty[y];
    const std::size_t y1 = std::min(y0 + 1, f.height - 1);
    for (std::size_t x = 0; x < ow; ++x) {
      const auto [x0, fx] = tx[x];
      const std::size_t x1 = std::min(x0 + 1, f.width - 1);
      // a + t*(b-a) keeps constant regions exactly constant.
      const double top = sample(x0, y0) + fx * (sample(x1, y0) - sample(x0, y0));
      const double bot = sample(x0, y1) + fx * (sample(x1, y1) - sample(x0, y1));
      out[y * ow + x] = top + fy * (bot - top);
    }
  }
  return out;
}

/// Orthonormal 1D DCT-II basis, rows = frequency.
inline std::vector<double> dct_basis(std::size_t n, std::size_t keep) {
  std::vector<double> basis(keep * n);
  for (std::size_t k = 0; k < keep; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      basis[k * n + i] = scale * std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) *
                                          static_cast<double>(k) / (2.0 * static_cast<double>(n)));
    }
  }
  return basis;
}

}  // namespace detail

/// Low-frequency 8x8 block of the 2D DCT-II of the 32x32 resized luma, row-major.
/// The image mean is removed first, which only affects the DC term.
[[nodiscard]] inline std::array<double, kHashBlock * kHashBlock> phash_coefficients(const LumaFrame& frame) {
  constexpr std::size_t n = kHashResize;
  constexpr std::size_t m = kHashBlock;
  auto img = detail::resize_bilinear(frame, n, n);
  double mean = 0.0;
  for (double v : img) mean += v;
  mean /= static_cast<double>(img.size());
  for (double& v : img) v -= mean;

  static const auto basis = detail::dct_basis(n, m);
  // rows: tmp[u][x] = sum_y B[u][y] img[y][x]
  std::vector<double> tmp(m * n, 0.0);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t y = 0; y < n; ++y) {
      const double b = basis[u * n + y];
      for (std::size_t x = 0; x < n; ++x) tmp[u * n + x] += b * img[y * n + x];
    }
  }
  std::array<double, m * m> coeffs{};
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      double acc = 0.0;
      for (std::size_t x = 0; x < n; ++x) acc += basis[v * n + x] * tmp[u * n + x];
      coeffs[u * m + v] = acc;
    }
  }
  return coeffs;
}

[[nodiscard]] inline PerceptualHash hash_from_coefficients(const std::array<double, kHashBlock * kHashBlock>& c) {
  std::array<double, kHashBlock * kHashBlock - 1> ac{};
  std::copy(c.begin() + 1, c.end(), ac.begin());
  auto mid = ac.begin() + ac.size() / 2;
  std::nth_element(ac.begin(), mid, ac.end());
  const double median = *mid;
  PerceptualHash h;
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k] > median) h.bits |= std::uint64_t{1} << k;
  }
  return h;
}

[[nodiscard]] inline PerceptualHash phash(const LumaFrame& frame) {
  return hash_from_coefficients(phash_coefficients(frame));
}

}  // namespace devil::frame
