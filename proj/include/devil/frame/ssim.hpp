#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"

namespace devil::frame {

struct SsimParams {
  int radius = 5;  // 11x11 window
  double sigma = 1.5;
  double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  double c2 = (0.03 * 255.0) * (0.03 * 255.0);
};

namespace detail {

inline std::vector<double> gaussian_kernel(int radius, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i + radius)];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Symmetric (edge-duplicating) reflection: ... c b a | a b c ... c | c b a ...
inline std::ptrdiff_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return i;
}

// Separable Gaussian filter with symmetric padding; output has the input's size.
inline std::vector<double> blur(const std::vector<double>& img, std::size_t w, std::size_t h,
                                const std::vector<double>& k) {
  const auto r = static_cast<std::ptrdiff_t>(k.size() / 2);
  const auto sw = static_cast<std::ptrdiff_t>(w);
  const auto sh = static_cast<std::ptrdiff_t>(h);
  std::vector<double> tmp(img.size());
  std::vector<double> out(img.size());
  for (std::ptrdiff_t y = 0; y < sh; ++y) {
    for (std::ptrdiff_t x = 0; x < sw; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t t = -r; t <= r; ++t) acc += k[static_cast<std::size_t>(t + r)] * img[y * sw + reflect(x + t, sw)];
      tmp[y * sw + x] = acc;
    }
  }
  for (std::ptrdiff_t y = 0; y < sh; ++y) {
    for (std::ptrdiff_t x = 0; x < sw; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t t = -r; t <= r; ++t) acc += k[static_cast<std::size_t>(t + r)] * tmp[reflect(y + t, sh) * sw + x];
      out[y * sw + x] = acc;
    }
  }
  return out;
}

}  // namespace detail

/// Mean of the local SSIM map between two luma frames.
[[nodiscard]] inline double ssim(const LumaFrame& a, const LumaFrame& b, const SsimParams& p = {}) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorKind::Inconsistency, "ssim frames differ in size");
  }
  const std::size_t n = a.px.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a.px[i];
    y[i] = b.px[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto k = detail::gaussian_kernel(p.radius, p.sigma);
  const auto mx = detail::blur(x, a.width, a.height, k);
  const auto my = detail::blur(y, a.width, a.height, k);
  const auto mxx = detail::blur(xx, a.width, a.height, k);
  const auto myy = detail::blur(yy, a.width, a.height, k);
  const auto mxy = detail::blur(xy, a.width, a.height, k);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double vx = mxx[i] - mx[i] * mx[i];
    const double vy = myy[i] - my[i] * my[i];
    const double cov = mxy[i] - mx[i] * my[i];
    const double num = (2.0 * mx[i] * my[i] + p.c1) * (2.0 * cov + p.c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + p.c1) * (vx + vy + p.c2);
    total += num / den;
  }
  return total / static_cast<double>(n);
}

}  // namespace devil::frame
