#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "devil/core/random.hpp"
#include "devil/core/types.hpp"

namespace oracle {

/// Twenty seeded luma images of mixed content and size (no side a multiple of 32,
/// so no resize is an exact 2x reduction).
inline std::vector<devil::LumaFrame> image_corpus() {
  std::vector<devil::LumaFrame> out;
  devil::Rng rng(2024);
  const std::size_t sides[][2] = {{48, 40}, {57, 33}, {100, 75}, {17, 23}, {81, 81}};
  for (int k = 0; k < 20; ++k) {
    const auto w = sides[k % 5][0];
    const auto h = sides[k % 5][1];
    devil::LumaFrame f(w, h);
    const double fx = 0.05 + 0.3 * rng.uniform();
    const double fy = 0.05 + 0.3 * rng.uniform();
    const double phase = 6.0 * rng.uniform();
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        double v = 0.0;
        switch (k % 4) {
          case 0: v = static_cast<double>(rng.below(256)); break;
          case 1: v = 127.5 + 120.0 * std::sin(fx * x + phase) * std::cos(fy * y); break;
          case 2: v = ((x / (3 + k % 7) + y / (4 + k % 5)) % 2) ? 210.0 : 40.0; break;
          default: {
            const double dx = static_cast<double>(x) - w / 2.0;
            const double dy = static_cast<double>(y) - h / 2.0;
            v = 255.0 * std::exp(-(dx * dx + dy * dy) / (2.0 * (20.0 + 40.0 * fx))) + 30.0 * rng.uniform();
          }
        }
        f.at(x, y) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace oracle
