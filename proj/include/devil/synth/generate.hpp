#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/random.hpp"
#include "devil/core/types.hpp"

namespace devil::synth {

enum class Kind { Static, Translate, Periodic, Noise, SceneCut };
enum class Pattern { Checkerboard, Sinusoid, Gradient };

constexpr std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::Static: return "static";
    case Kind::Translate: return "translate";
    case Kind::Periodic: return "periodic";
    case Kind::Noise: return "noise";
    case Kind::SceneCut: return "scene_cut";
  }
  return "unknown";
}

constexpr std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::Checkerboard: return "checkerboard";
    case Pattern::Sinusoid: return "sinusoid";
    case Pattern::Gradient: return "gradient";
  }
  return "unknown";
}

inline constexpr std::size_t kMaxTranslateSpeed = 8;  // the block matcher's search radius
inline constexpr std::size_t kCheckerSquare = 8;
inline constexpr std::size_t kSinusoidPeriod = 32;

struct SynthSpec {
  Kind kind = Kind::Static;
  Pattern pattern = Pattern::Checkerboard;
  std::size_t frames = 16;
  std::size_t height = 64;
  std::size_t width = 64;
  std::size_t speed = 1;        // translate: px/frame to the right; periodic: px shift per loop step
  std::size_t loop_length = 8;  // periodic
  std::size_t repeats = 2;      // periodic
  std::uint64_t seed = 0;       // noise pixels and all feature vectors
  std::size_t cut_point = 8;    // scene_cut: first frame of the second scene

  void validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorKind::Validation, "synth spec: " + what); };
    if (frames < 2) bad("need at least 2 frames");
    if (width < kMinFrameSide || height < kMinFrameSide) bad("frame sides must be at least 16");
    if (kind == Kind::Translate && (speed < 1 || speed > kMaxTranslateSpeed)) bad("translate speed must be in 1..8");
    if (kind == Kind::Periodic) {
      if (loop_length < 2 || repeats < 1) bad("periodic needs loop_length >= 2 and repeats >= 1");
      if (loop_length * repeats != frames) bad("periodic frame count must equal loop_length * repeats");
    }
    if (kind == Kind::SceneCut && (cut_point < 1 || cut_point >= frames)) bad("cut_point must be inside the clip");
  }
};

namespace detail {

// Integer parabolic stand-in for a sine wave with period kSinusoidPeriod, in 1..255.
inline std::uint8_t sinusoid(std::size_t x) {
  constexpr std::size_t half = kSinusoidPeriod / 2;
  const std::size_t t = x % half;
  const auto bump = static_cast<int>(4 * 127 * t * (half - t) / (half * half));
  return static_cast<std::uint8_t>((x % kSinusoidPeriod) < half ? 128 + bump : 128 - bump);
}

inline std::uint8_t pattern_value(Pattern p, std::size_t x, std::size_t y, std::size_t w, std::size_t h) {
  switch (p) {
    case Pattern::Checkerboard: return ((x / kCheckerSquare + y / kCheckerSquare) % 2) != 0 ? 224 : 32;
    case Pattern::Sinusoid: {
      const int v = (sinusoid(x) + sinusoid(y + kSinusoidPeriod / 4)) / 2;
      return static_cast<std::uint8_t>(v);
    }
    case Pattern::Gradient: return static_cast<std::uint8_t>((x * 255 / (w - 1) + y * 255 / (h - 1)) / 2);
  }
  return 0;
}

// Pattern shifted right by `shift` px with wrap-around, optionally inverted.
inline RgbFrame pattern_frame(const SynthSpec& s, std::size_t shift, bool invert) {
  RgbFrame f(s.width, s.height);
  for (std::size_t y = 0; y < s.height; ++y) {
    for (std::size_t x = 0; x < s.width; ++x) {
      const std::size_t src = (x + s.width - shift % s.width) % s.width;
      std::uint8_t v = pattern_value(s.pattern, src, y, s.width, s.height);
      if (invert) v = static_cast<std::uint8_t>(255 - v);
      std::uint8_t* px = &f.rgb[(y * s.width + x) * 3];
      px[0] = px[1] = px[2] = v;
    }
  }
  return f;
}

}  // namespace detail

/// Deterministic frames for a spec. All pixel math is integer.
[[nodiscard]] inline FrameSequence generate(const SynthSpec& s) {
  s.validate();
  FrameSequence seq{s.width, s.height, {}};
  seq.frames.reserve(s.frames);
  switch (s.kind) {
    case Kind::Static: {
      const auto f = detail::pattern_frame(s, 0, false);
      seq.frames.assign(s.frames, f);
      break;
    }
    case Kind::Translate:
      for (std::size_t i = 0; i < s.frames; ++i) seq.frames.push_back(detail::pattern_frame(s, i * s.speed, false));
      break;
    case Kind::Periodic: {
      std::vector<RgbFrame> loop;
      for (std::size_t i = 0; i < s.loop_length; ++i) loop.push_back(detail::pattern_frame(s, i * s.speed, false));
      for (std::size_t i = 0; i < s.frames; ++i) seq.frames.push_back(loop[i % s.loop_length]);
      break;
    }
    case Kind::Noise: {
      Rng rng(s.seed);
      for (std::size_t i = 0; i < s.frames; ++i) {
        RgbFrame f(s.width, s.height);
        for (auto& b : f.rgb) b = static_cast<std::uint8_t>(rng.below(256));
        seq.frames.push_back(std::move(f));
      }
      break;
    }
    case Kind::SceneCut: {
      const auto a = detail::pattern_frame(s, 0, false);
      const auto b = detail::pattern_frame(s, s.width / 2, true);
      for (std::size_t i = 0; i < s.frames; ++i) seq.frames.push_back(i < s.cut_point ? a : b);
      break;
    }
  }
  seq.validate();
  return seq;
}

inline constexpr std::uint32_t kFeatureDim = 16;
inline constexpr std::uint32_t kFeatureGrid = 4;
inline constexpr std::uint32_t kPatchDim = 8;
inline constexpr double kRotationPerPixel = 0.05;  // radians per px of translation

namespace detail {

inline std::vector<double> gaussian_vector(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.normal();
  return v;
}

// Per-frame vectors of one feature stream (frame embedding or one grid cell).
inline std::vector<std::vector<double>> feature_stream(const SynthSpec& s, Rng& rng, std::size_t dim) {
  std::vector<std::vector<double>> out(s.frames);
  switch (s.kind) {
    case Kind::Static: {
      const auto v = gaussian_vector(rng, dim);
      for (auto& f : out) f = v;
      break;
    }
    case Kind::Translate: {
      // Unit-speed rotation in the plane of two random directions.
      const auto a = gaussian_vector(rng, dim);
      const auto b = gaussian_vector(rng, dim);
      for (std::size_t i = 0; i < s.frames; ++i) {
        const double theta = kRotationPerPixel * static_cast<double>(s.speed * i);
        out[i].resize(dim);
        for (std::size_t j = 0; j < dim; ++j) out[i][j] = std::cos(theta) * a[j] + std::sin(theta) * b[j];
      }
      break;
    }
    case Kind::Periodic: {
      std::vector<std::vector<double>> loop;
      for (std::size_t i = 0; i < s.loop_length; ++i) loop.push_back(gaussian_vector(rng, dim));
      for (std::size_t i = 0; i < s.frames; ++i) out[i] = loop[i % s.loop_length];
      break;
    }
    case Kind::Noise:
      for (auto& f : out) f = gaussian_vector(rng, dim);
      break;
    case Kind::SceneCut: {
      const auto a = gaussian_vector(rng, dim);
      const auto b = gaussian_vector(rng, dim);
      for (std::size_t i = 0; i < s.frames; ++i) out[i] = i < s.cut_point ? a : b;
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Frame embeddings (N x 16), patch maps (N x 4 x 4 x 8) and segment
/// embeddings (4 x 16, the mean frame embedding of each segment) whose temporal
/// structure follows the spec kind.
[[nodiscard]] inline EmbeddingBundle generate_features(const SynthSpec& s) {
  s.validate();
  Rng rng(s.seed);
  const auto n = static_cast<std::uint32_t>(s.frames);
  EmbeddingBundle b;

  const auto frames = detail::feature_stream(s, rng, kFeatureDim);
  Tensor fe({n, kFeatureDim});
  for (std::size_t i = 0; i < s.frames; ++i) {
    for (std::size_t j = 0; j < kFeatureDim; ++j) fe.data[i * kFeatureDim + j] = static_cast<float>(frames[i][j]);
  }

  Tensor pm({n, kFeatureGrid, kFeatureGrid, kPatchDim});
  for (std::size_t cell = 0; cell < kFeatureGrid * kFeatureGrid; ++cell) {
    const auto stream = detail::feature_stream(s, rng, kPatchDim);
    for (std::size_t i = 0; i < s.frames; ++i) {
      const std::size_t base = (i * kFeatureGrid * kFeatureGrid + cell) * kPatchDim;
      for (std::size_t j = 0; j < kPatchDim; ++j) pm.data[base + j] = static_cast<float>(stream[i][j]);
    }
  }

  const std::size_t seg_len = s.frames / 4;
  if (seg_len >= 1) {
    Tensor se({4, kFeatureDim});
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t j = 0; j < kFeatureDim; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < seg_len; ++i) sum += static_cast<double>(fe.data[(k * seg_len + i) * kFeatureDim + j]);
        se.data[k * kFeatureDim + j] = static_cast<float>(sum / static_cast<double>(seg_len));
      }
    }
    b.segment_embeddings = std::move(se);
  }
  b.frame_embeddings = std::move(fe);
  b.patch_maps = std::move(pm);
  b.validate();
  return b;
}

/// Seeded permutation of 0..n-1.
[[nodiscard]] inline std::vector<std::size_t> frame_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span(perm));
  return perm;
}

namespace detail {

inline Tensor permute_leading(const Tensor& t, std::span<const std::size_t> perm) {
  if (t.dim(0) != perm.size()) throw Error(ErrorKind::Inconsistency, "permutation length differs from frame count");
  Tensor out = t;
  const std::size_t stride = t.data.size() / t.dim(0);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    std::copy_n(t.data.begin() + static_cast<std::ptrdiff_t>(perm[i] * stride), stride,
                out.data.begin() + static_cast<std::ptrdiff_t>(i * stride));
  }
  return out;
}

}  // namespace detail

/// Frame i of the result is frame perm[i] of the input. Per-frame sections are
/// permuted; segment embeddings are dropped since their frames no longer match,
/// and flow fields are dropped for the same reason.
[[nodiscard]] inline EmbeddingBundle permute_frames(const EmbeddingBundle& b, std::span<const std::size_t> perm) {
  EmbeddingBundle out;
  if (b.frame_embeddings) out.frame_embeddings = detail::permute_leading(*b.frame_embeddings, perm);
  if (b.patch_maps) out.patch_maps = detail::permute_leading(*b.patch_maps, perm);
  return out;
}

[[nodiscard]] inline FrameSequence permute_frames(const FrameSequence& seq, std::span<const std::size_t> perm) {
  if (seq.size() != perm.size()) throw Error(ErrorKind::Inconsistency, "permutation length differs from frame count");
  FrameSequence out{seq.width, seq.height, {}};
  for (auto i : perm) out.frames.push_back(seq.frames[i]);
  return out;
}

}  // namespace devil::synth
