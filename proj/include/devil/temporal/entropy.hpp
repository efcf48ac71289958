#pragma once

#include <zlib.h>

#include <cstdlib>
#include <filesystem>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/subprocess.hpp"
#include "devil/core/types.hpp"

namespace devil::temporal {

inline constexpr int kResidualCompressionLevel = 9;

namespace detail {

// Raw deflate stream (no zlib header or checksum), so the size counts only coded residual data.
inline std::size_t deflated_size(std::span<const std::uint8_t> data) {
  z_stream zs{};
  if (deflateInit2(&zs, kResidualCompressionLevel, Z_DEFLATED, -15, 9, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorKind::Tool, "zlib deflateInit2 failed");
  }
  std::vector<Bytef> out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const std::size_t size = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::Tool, "zlib deflate failed with code " + std::to_string(rc));
  return size;
}

}  // namespace detail

/// Temporal-entropy proxy in bits per pixel: frame-to-frame luma residuals
/// (f[i+1] - f[i] mod 256, i = 1..N-1) concatenated and deflated at level 9.
[[nodiscard]] inline double temporal_entropy_builtin(std::span<const LumaFrame> frames) {
  if (frames.size() < 2) throw Error(ErrorKind::TooFewFrames, "temporal entropy needs at least 2 frames");
  const std::size_t pixels = frames[0].px.size();
  std::vector<std::uint8_t> residual;
  residual.reserve(pixels * (frames.size() - 1));
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    if (frames[i + 1].px.size() != pixels) throw Error(ErrorKind::Inconsistency, "frames differ in size");
    for (std::size_t p = 0; p < pixels; ++p) {
      residual.push_back(static_cast<std::uint8_t>(frames[i + 1].px[p] - frames[i].px[p]));
    }
  }
  return 8.0 * static_cast<double>(detail::deflated_size(residual)) / static_cast<double>(residual.size());
}

/// Whitespace-tokenised command template. Placeholders {input}, {output},
/// {width}, {height} and {frames} are substituted inside each token, so paths
/// with spaces survive intact.
struct EncoderCommand {
  std::string command_template;

  [[nodiscard]] std::vector<std::string> expand(const std::string& input, const std::string& output, std::size_t width,
                                                std::size_t height, std::size_t frames) const {
    std::vector<std::string> argv;
    std::istringstream in(command_template);
    std::string tok;
    while (in >> tok) {
      auto sub = [&tok](const std::string& key, const std::string& value) {
        for (auto pos = tok.find(key); pos != std::string::npos; pos = tok.find(key, pos + value.size())) {
          tok.replace(pos, key.size(), value);
        }
      };
      sub("{input}", input);
      sub("{output}", output);
      sub("{width}", std::to_string(width));
      sub("{height}", std::to_string(height));
      sub("{frames}", std::to_string(frames));
      argv.push_back(tok);
    }
    if (argv.empty()) throw Error(ErrorKind::Validation, "encoder command template is empty");
    return argv;
  }
};

/// Pinned default: x264 at a fixed quantiser, one keyframe, no B-frames,
/// single-threaded, raw Annex-B output (no container overhead).
inline constexpr std::string_view kDefaultEncoderTemplate =
    "ffmpeg -nostdin -hide_banner -loglevel error -y -f rawvideo -pix_fmt rgb24 -s {width}x{height} -r 25 "
    "-i {input} -an -c:v libx264 -preset medium -qp 23 -g 100000 -keyint_min 100000 -sc_threshold 0 -bf 0 "
    "-threads 1 -f h264 {output}";

namespace detail {

class TempDir {
 public:
  TempDir() {
    auto pattern = (std::filesystem::temp_directory_path() / "devil-te-XXXXXX").string();
    if (mkdtemp(pattern.data()) == nullptr) throw Error(ErrorKind::Io, "cannot create temp directory");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::uintmax_t encode_size(const EncoderCommand& cmd, const FrameSequence& video, std::size_t frame_count,
                                  const std::filesystem::path& dir, const std::string& tag) {
  const auto input = dir / (tag + ".rgb");
  const auto output = dir / (tag + ".bin");
  std::vector<std::uint8_t> raw;
  for (std::size_t i = 0; i < frame_count; ++i) {
    raw.insert(raw.end(), video.frames[i].rgb.begin(), video.frames[i].rgb.end());
  }
  io::write_file_bytes(input, raw);
  const auto argv = cmd.expand(input.string(), output.string(), video.width, video.height, frame_count);
  const auto result = proc::run(argv);
  if (result.exit_code != 0) {
    throw Error(ErrorKind::Tool,
                "encoder exited with status " + std::to_string(result.exit_code) + ": " + result.output);
  }
  if (!std::filesystem::exists(output)) {
    throw Error(ErrorKind::Tool, "encoder produced no output file; output: " + result.output);
  }
  return std::filesystem::file_size(output);
}

}  // namespace detail

/// External-encoder estimate: bits spent on frames 2..N, taken as the encoded
/// size of the whole clip minus the encoded size of frame 1 alone.
[[nodiscard]] inline double temporal_entropy_external(const FrameSequence& video, const EncoderCommand& cmd) {
  if (video.size() < 2) throw Error(ErrorKind::TooFewFrames, "temporal entropy needs at least 2 frames");
  detail::TempDir dir;
  const auto full = detail::encode_size(cmd, video, video.size(), dir.path(), "full");
  const auto first = detail::encode_size(cmd, video, 1, dir.path(), "first");
  const double bits = 8.0 * (static_cast<double>(full) - static_cast<double>(first));
  return bits / static_cast<double>((video.size() - 1) * video.width * video.height);
}

}  // namespace devil::temporal
