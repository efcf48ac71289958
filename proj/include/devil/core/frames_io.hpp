#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/image_io.hpp"
#include "devil/core/types.hpp"

namespace devil::io {

// .devf layout: "DEVF", u32 version=1, u32 N, u32 H, u32 W, then N*H*W*3 RGB bytes.
inline constexpr std::string_view kDevfMagic = "DEVF";
inline constexpr std::uint32_t kDevfVersion = 1;

[[nodiscard]] inline std::vector<std::uint8_t> encode_devf(const FrameSequence& seq) {
  ByteWriter w;
  w.magic(kDevfMagic);
  w.u32(kDevfVersion);
  w.u32(static_cast<std::uint32_t>(seq.frames.size()));
  w.u32(static_cast<std::uint32_t>(seq.height));
  w.u32(static_cast<std::uint32_t>(seq.width));
  for (const auto& f : seq.frames) w.raw(f.rgb);
  return w.take();
}

[[nodiscard]] inline FrameSequence decode_devf(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic(kDevfMagic);
  const auto version = r.u32();
  if (version != kDevfVersion) {
    throw Error(ErrorKind::Format, "unsupported .devf version " + std::to_string(version));
  }
  const std::uint64_t n = r.u32();
  const std::uint64_t h = r.u32();
  const std::uint64_t w = r.u32();
  if (w < kMinFrameSide || h < kMinFrameSide) {
    throw Error(ErrorKind::Format, ".devf dimensions " + std::to_string(w) + "x" + std::to_string(h) +
                                       " below minimum " + std::to_string(kMinFrameSide));
  }
  const std::uint64_t frame_bytes = w * h * 3;
  if (r.remaining() != n * frame_bytes) {
    throw Error(ErrorKind::Format, ".devf declares " + std::to_string(n) + " frames of " + std::to_string(w) + "x" +
                                       std::to_string(h) + " but payload holds " + std::to_string(r.remaining()) +
                                       " bytes");
  }
  FrameSequence seq;
  seq.width = w;
  seq.height = h;
  seq.frames.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    RgbFrame f(w, h);
    auto src = r.raw(frame_bytes, "frame");
    std::copy(src.begin(), src.end(), f.rgb.begin());
    seq.frames.push_back(std::move(f));
  }
  seq.validate();
  return seq;
}

inline void write_devf(const FrameSequence& seq, const std::filesystem::path& path) {
  write_file_bytes(path, encode_devf(seq));
}

[[nodiscard]] inline bool is_lossless_image(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

/// Loads a `.devf` container or a directory of lossless images (sorted by filename).
[[nodiscard]] inline FrameSequence load_frames(const std::filesystem::path& source) {
  namespace fs = std::filesystem;
  if (fs::is_directory(source)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source)) {
      if (entry.is_regular_file() && is_lossless_image(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    FrameSequence seq;
    for (const auto& file : files) {
      auto ext = file.extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      seq.frames.push_back(ext == ".png" ? read_png(file) : read_pnm(file));
    }
    if (!seq.frames.empty()) {
      seq.width = seq.frames.front().width;
      seq.height = seq.frames.front().height;
    }
    if (seq.frames.size() < 2) {
      throw Error(ErrorKind::TooFewFrames,
                  "need at least 2 frames in " + source.string() + ", found " + std::to_string(seq.frames.size()));
    }
    seq.validate();
    return seq;
  }
  if (!fs::exists(source)) throw Error(ErrorKind::Io, "no such frame source: " + source.string());
  return decode_devf(read_file_bytes(source));
}

}  // namespace devil::io
