#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "devil/core/error.hpp"

namespace devil {

inline constexpr std::size_t kMinFrameSide = 16;

/// One 8-bit RGB raster, row-major, 3 bytes per pixel.
struct RgbFrame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;

  RgbFrame() = default;
  RgbFrame(std::size_t w, std::size_t h) : width(w), height(h), rgb(w * h * 3, 0) {}

  [[nodiscard]] std::uint8_t* pixel(std::size_t x, std::size_t y) { return &rgb[(y * width + x) * 3]; }
  [[nodiscard]] const std::uint8_t* pixel(std::size_t x, std::size_t y) const {
    return &rgb[(y * width + x) * 3];
  }
  bool operator==(const RgbFrame&) const = default;
};

/// Single-channel 8-bit luma raster.
struct LumaFrame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> px;

  LumaFrame() = default;
  LumaFrame(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), px(w * h, fill) {}

  [[nodiscard]] std::uint8_t at(std::size_t x, std::size_t y) const { return px[y * width + x]; }
  [[nodiscard]] std::uint8_t& at(std::size_t x, std::size_t y) { return px[y * width + x]; }
  bool operator==(const LumaFrame&) const = default;
};

/// BT.601 luma, round-half-up of 0.299R + 0.587G + 0.114B, in exact integer arithmetic.
[[nodiscard]] constexpr std::uint8_t luma_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

[[nodiscard]] inline LumaFrame to_luma(const RgbFrame& frame) {
  LumaFrame out(frame.width, frame.height);
  for (std::size_t i = 0; i < out.px.size(); ++i) {
    out.px[i] = luma_of(frame.rgb[3 * i], frame.rgb[3 * i + 1], frame.rgb[3 * i + 2]);
  }
  return out;
}

/// A decoded video. Invariants are enforced by `validate()`, which every loader calls.
struct FrameSequence {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<RgbFrame> frames;

  [[nodiscard]] std::size_t size() const { return frames.size(); }

  void validate() const {
    if (width < kMinFrameSide || height < kMinFrameSide) {
      throw Error(ErrorKind::Format, "frame dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                                         " below minimum " + std::to_string(kMinFrameSide));
    }
    if (frames.size() < 2) {
      throw Error(ErrorKind::TooFewFrames, "need at least 2 frames, got " + std::to_string(frames.size()));
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& f = frames[i];
      if (f.width != width || f.height != height || f.rgb.size() != width * height * 3) {
        throw Error(ErrorKind::Inconsistency, "frame " + std::to_string(i) + " has dimensions " +
                                                  std::to_string(f.width) + "x" + std::to_string(f.height) +
                                                  ", expected " + std::to_string(width) + "x" +
                                                  std::to_string(height));
      }
    }
  }

  [[nodiscard]] std::vector<LumaFrame> luma() const {
    std::vector<LumaFrame> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(to_luma(f));
    return out;
  }

  bool operator==(const FrameSequence&) const = default;
};

/// Dense row-major f32 tensor as carried by DEVB files.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::uint32_t> d) : dims(std::move(d)), data(element_count(dims), 0.0F) {}

  [[nodiscard]] static std::size_t element_count(std::span<const std::uint32_t> d) {
    return std::accumulate(d.begin(), d.end(), std::size_t{1},
                           [](std::size_t a, std::uint32_t b) { return a * b; });
  }
  [[nodiscard]] std::size_t rank() const { return dims.size(); }
  [[nodiscard]] std::size_t dim(std::size_t i) const { return dims.at(i); }
  [[nodiscard]] bool empty() const { return dims.empty(); }

  /// Contiguous slice for the leading index; the remaining dims form the row.
  [[nodiscard]] std::span<const float> row(std::size_t i) const {
    const std::size_t stride = dims.empty() ? 0 : data.size() / dims[0];
    return std::span<const float>(data).subspan(i * stride, stride);
  }
  [[nodiscard]] std::span<float> row(std::size_t i) {
    const std::size_t stride = dims.empty() ? 0 : data.size() / dims[0];
    return std::span<float>(data).subspan(i * stride, stride);
  }
  bool operator==(const Tensor&) const = default;
};

enum class SectionTag : std::uint8_t {
  FrameEmbeddings = 1,
  PatchMaps = 2,
  SegmentEmbeddings = 3,
  FlowFields = 4,
};

/// Learned (or synthetic) per-video features. Absent sections are nullopt.
///   frame_embeddings   N x C
///   patch_maps         N x H' x W' x C'
///   segment_embeddings n_seg x C''
///   flow_fields        (N-1) x H x W x 2
struct EmbeddingBundle {
  std::optional<Tensor> frame_embeddings;
  std::optional<Tensor> patch_maps;
  std::optional<Tensor> segment_embeddings;
  std::optional<Tensor> flow_fields;

  [[nodiscard]] bool empty() const {
    return !frame_embeddings && !patch_maps && !segment_embeddings && !flow_fields;
  }

  /// Checks ranks, finiteness and the cross-section frame count.
  void validate() const {
    auto check = [](const std::optional<Tensor>& t, std::size_t rank, const char* name) {
      if (!t) return;
      if (t->rank() != rank) {
        throw Error(ErrorKind::Format, std::string(name) + " must have rank " + std::to_string(rank) + ", got " +
                                           std::to_string(t->rank()));
      }
      for (auto d : t->dims) {
        if (d == 0) throw Error(ErrorKind::Format, std::string(name) + " has a zero dimension");
      }
      if (t->data.size() != Tensor::element_count(t->dims)) {
        throw Error(ErrorKind::Format, std::string(name) + " payload size does not match its dims");
      }
      for (float v : t->data) {
        if (!std::isfinite(v)) throw Error(ErrorKind::Format, std::string(name) + " contains a non-finite value");
      }
    };
    check(frame_embeddings, 2, "frame_embeddings");
    check(patch_maps, 4, "patch_maps");
    check(segment_embeddings, 2, "segment_embeddings");
    check(flow_fields, 4, "flow_fields");
    if (flow_fields && flow_fields->dim(3) != 2) {
      throw Error(ErrorKind::Format, "flow_fields trailing dimension must be 2");
    }

    std::optional<std::size_t> n;
    auto agree = [&n](std::size_t frames, const char* name) {
      if (n && *n != frames) {
        throw Error(ErrorKind::Inconsistency, std::string(name) + " implies " + std::to_string(frames) +
                                                  " frames, other sections imply " + std::to_string(*n));
      }
      n = frames;
    };
    if (frame_embeddings) agree(frame_embeddings->dim(0), "frame_embeddings");
    if (patch_maps) agree(patch_maps->dim(0), "patch_maps");
    if (flow_fields) agree(std::size_t{flow_fields->dim(0)} + 1, "flow_fields");
  }

  bool operator==(const EmbeddingBundle&) const = default;
};

inline constexpr int kMinGrade = 1;
inline constexpr int kMaxGrade = 5;

[[nodiscard]] constexpr bool is_valid_grade(long g) { return g >= kMinGrade && g <= kMaxGrade; }

struct BenchmarkEntry {
  std::string id;
  std::string prompt;
  int grade = 1;
  bool operator==(const BenchmarkEntry&) const = default;
};

enum class QualityMetric { Naturalness, MotionSmoothness, SubjectConsistency, BackgroundConsistency };

inline constexpr std::array<QualityMetric, 4> kAllQualityMetrics = {
    QualityMetric::Naturalness, QualityMetric::MotionSmoothness, QualityMetric::SubjectConsistency,
    QualityMetric::BackgroundConsistency};

constexpr std::string_view to_string(QualityMetric m) {
  switch (m) {
    case QualityMetric::Naturalness: return "naturalness";
    case QualityMetric::MotionSmoothness: return "motion_smoothness";
    case QualityMetric::SubjectConsistency: return "subject_consistency";
    case QualityMetric::BackgroundConsistency: return "background_consistency";
  }
  return "unknown";
}

struct QualityRecord {
  std::string video_id;
  std::optional<double> naturalness;
  std::optional<double> motion_smoothness;
  std::optional<double> subject_consistency;
  std::optional<double> background_consistency;

  [[nodiscard]] const std::optional<double>& get(QualityMetric m) const {
    switch (m) {
      case QualityMetric::Naturalness: return naturalness;
      case QualityMetric::MotionSmoothness: return motion_smoothness;
      case QualityMetric::SubjectConsistency: return subject_consistency;
      case QualityMetric::BackgroundConsistency: return background_consistency;
    }
    return naturalness;
  }
  [[nodiscard]] std::optional<double>& get(QualityMetric m) {
    return const_cast<std::optional<double>&>(std::as_const(*this).get(m));
  }
  bool operator==(const QualityRecord&) const = default;
};

struct RatingsRecord {
  std::string video_id;
  int frame_grade = 1;
  int segment_grade = 1;
  int video_grade = 1;
  int naturalness_grade = 1;
  bool operator==(const RatingsRecord&) const = default;
};

/// The seven raw scores plus, once an alignment model is applied, the aligned
/// per-granularity scores and the overall score.
struct DynamicsScoreSet {
  double s_ofs = 0.0;
  double s_sd = 0.0;
  double s_pd = 0.0;
  double s_pa = 0.0;
  double s_ga = 0.0;
  double s_te = 0.0;
  double s_tsd = 0.0;
  std::optional<double> s_f;
  std::optional<double> s_s;
  std::optional<double> s_v;
  std::optional<double> overall;

  [[nodiscard]] std::vector<double> frame_features() const { return {s_ofs, s_sd, s_pd}; }
  [[nodiscard]] std::vector<double> segment_features() const { return {s_pa, s_ga}; }
  [[nodiscard]] std::vector<double> video_features() const { return {s_te, s_tsd}; }
  bool operator==(const DynamicsScoreSet&) const = default;
};

}  // namespace devil
