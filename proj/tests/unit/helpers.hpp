#pragma once

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <string>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"
#include "devil/temporal/entropy.hpp"

namespace testing_util {

using ScratchDir = devil::temporal::detail::TempDir;

inline devil::LumaFrame luma(std::size_t w, std::size_t h, const std::function<int(std::size_t, std::size_t)>& f) {
  devil::LumaFrame out;
  out.width = w;
  out.height = h;
  out.px.resize(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) out.px[y * w + x] = static_cast<std::uint8_t>(f(x, y));
  }
  return out;
}

inline devil::RgbFrame gray(const devil::LumaFrame& l) {
  devil::RgbFrame f(l.width, l.height);
  for (std::size_t i = 0; i < l.px.size(); ++i) f.rgb[3 * i] = f.rgb[3 * i + 1] = f.rgb[3 * i + 2] = l.px[i];
  return f;
}

}  // namespace testing_util

/// Expects `stmt` to throw devil::Error of the given kind.
#define EXPECT_DEVIL_ERROR(stmt, error_kind)                                                  \
  do {                                                                                         \
    try {                                                                                      \
      stmt;                                                                                    \
      ADD_FAILURE() << "expected " << devil::to_string(error_kind) << " error from " #stmt;    \
    } catch (const devil::Error& e) {                                                          \
      EXPECT_EQ(e.kind(), error_kind) << e.what();                                             \
    }                                                                                          \
  } while (0)
