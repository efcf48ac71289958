#pragma once

#include <png.h>

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/types.hpp"

namespace devil::io {

/// Decodes a PNG file (any colour type) to 8-bit RGB.
[[nodiscard]] inline RgbFrame read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_file(&image, path.string().c_str()) == 0) {
    throw Error(ErrorKind::Format, "cannot decode PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbFrame frame(image.width, image.height);
  if (png_image_finish_read(&image, nullptr, frame.rgb.data(), 0, nullptr) == 0) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::Format, "cannot decode PNG " + path.string() + ": " + msg);
  }
  return frame;
}

[[nodiscard]] inline std::vector<std::uint8_t> encode_png(const RgbFrame& frame) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width);
  image.height = static_cast<png_uint_32>(frame.height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (png_image_write_to_memory(&image, nullptr, &size, 0, frame.rgb.data(), 0, nullptr) == 0) {
    throw Error(ErrorKind::Format, std::string("PNG size query failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (png_image_write_to_memory(&image, out.data(), &size, 0, frame.rgb.data(), 0, nullptr) == 0) {
    throw Error(ErrorKind::Format, std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

inline void write_png(const RgbFrame& frame, const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(frame.width);
  image.height = static_cast<png_uint_32>(frame.height);
  image.format = PNG_FORMAT_RGB;
  if (png_image_write_to_file(&image, path.string().c_str(), 0, frame.rgb.data(), 0, nullptr) == 0) {
    throw Error(ErrorKind::Io, "cannot write PNG " + path.string() + ": " + image.message);
  }
}

/// Binary PPM (P6, maxval 255) or PGM (P5, maxval 255).
[[nodiscard]] inline RgbFrame read_pnm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos]) != 0) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&] {
    skip_ws();
    std::size_t v = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) != 0) {
      v = v * 10 + (bytes[pos++] - '0');
      any = true;
      if (v > (1u << 24)) break;
    }
    if (!any) throw Error(ErrorKind::Format, "malformed PNM header in " + path.string());
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw Error(ErrorKind::Format, "not a binary PPM/PGM: " + path.string());
  }
  const bool gray = bytes[1] == '5';
  pos = 2;
  const std::size_t w = number();
  const std::size_t h = number();
  const std::size_t maxval = number();
  if (maxval != 255) throw Error(ErrorKind::Format, "only 8-bit PNM supported: " + path.string());
  ++pos;  // single whitespace after maxval
  const std::size_t channels = gray ? 1 : 3;
  if (bytes.size() < pos || bytes.size() - pos < w * h * channels) {
    throw Error(ErrorKind::Format, "truncated PNM payload in " + path.string());
  }
  RgbFrame frame(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      frame.rgb[3 * i + c] = bytes[pos + i * channels + (gray ? 0 : c)];
    }
  }
  return frame;
}

}  // namespace devil::io
