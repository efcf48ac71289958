#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "devil/core/binary_io.hpp"
#include "devil/core/embeddings_io.hpp"
#include "devil/core/frames_io.hpp"
#include "devil/core/random.hpp"
#include "devil/core/tables.hpp"
#include "devil/synth/generate.hpp"

namespace devil::synth {

struct CorpusOptions {
  std::size_t videos = 24;
  std::size_t frames = 16;
  std::size_t side = 64;
  std::uint64_t seed = 0;
  bool features = true;  // write a DEVB file per video
};

struct CorpusVideo {
  std::string id;
  int grade = 1;
  SynthSpec spec;
};

/// Grade g gets content whose motion grows with g: 1 static, 2 slow drift,
/// 3 medium drift or a short loop, 4 fast drift, 5 noise or a scene cut.
[[nodiscard]] inline std::vector<CorpusVideo> plan_corpus(const CorpusOptions& o) {
  constexpr std::array<Pattern, 3> patterns = {Pattern::Checkerboard, Pattern::Sinusoid, Pattern::Gradient};
  std::vector<CorpusVideo> out;
  for (std::size_t k = 0; k < o.videos; ++k) {
    CorpusVideo v;
    char id[16];
    std::snprintf(id, sizeof id, "v%02zu", k + 1);
    v.id = id;
    v.grade = static_cast<int>(k % 5) + 1;
    SynthSpec& s = v.spec;
    s.pattern = patterns[(k / 5) % patterns.size()];
    s.frames = o.frames;
    s.width = s.height = o.side;
    s.seed = o.seed * 1000003ULL + k;
    const bool alt = (k / 5) % 2 == 1;
    switch (v.grade) {
      case 1: s.kind = Kind::Static; break;
      case 2: s.kind = Kind::Translate, s.speed = 1; break;
      case 3:
        if (alt && o.frames % 4 == 0) {
          s.kind = Kind::Periodic, s.speed = 3, s.loop_length = 4, s.repeats = o.frames / 4;
        } else {
          s.kind = Kind::Translate, s.speed = 2;
        }
        break;
      case 4: s.kind = Kind::Translate, s.speed = 4; break;
      default:
        if (alt) {
          s.kind = Kind::SceneCut, s.cut_point = o.frames / 2;
        } else {
          s.kind = Kind::Noise;
        }
    }
    out.push_back(v);
  }
  return out;
}

[[nodiscard]] inline std::string describe(const SynthSpec& s) {
  const std::string p(to_string(s.pattern));
  switch (s.kind) {
    case Kind::Static: return "a still " + p;
    case Kind::Translate: return "a " + p + " drifting right at " + std::to_string(s.speed) + " px per frame";
    case Kind::Periodic: return "a " + p + " looping every " + std::to_string(s.loop_length) + " frames";
    case Kind::Noise: return "flickering static noise";
    case Kind::SceneCut: return "a " + p + " that cuts to its negative";
  }
  return p;
}

namespace detail {

inline double round3(double x) { return std::round(std::clamp(x, 0.0, 1.0) * 1000.0) / 1000.0; }

inline int jitter_grade(int g, Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.1) return std::max(kMinGrade, g - 1);
  if (u < 0.2) return std::min(kMaxGrade, g + 1);
  return g;
}

}  // namespace detail

/// Writes videos/<id>.devf, features/<id>.devb (optional), benchmark.jsonl,
/// quality.csv (naturalness left empty) and ratings.csv under `dir`.
inline std::vector<CorpusVideo> write_corpus(const std::filesystem::path& dir, const CorpusOptions& o) {
  const auto plan = plan_corpus(o);
  std::filesystem::create_directories(dir / "videos");
  if (o.features) std::filesystem::create_directories(dir / "features");

  std::vector<BenchmarkEntry> bench;
  std::map<std::string, QualityRecord> quality;
  std::map<std::string, RatingsRecord> ratings;
  Rng rng(o.seed);
  for (const auto& v : plan) {
    io::write_devf(generate(v.spec), dir / "videos" / (v.id + ".devf"));
    if (o.features) io::write_embeddings(generate_features(v.spec), dir / "features" / (v.id + ".devb"));
    bench.push_back({v.id, describe(v.spec), v.grade});

    const double step = 0.05 * (v.grade - 1);
    QualityRecord q;
    q.video_id = v.id;
    q.motion_smoothness = detail::round3(0.98 - step - 0.03 * rng.uniform());
    q.subject_consistency = detail::round3(0.95 - 1.2 * step - 0.05 * rng.uniform());
    q.background_consistency = detail::round3(0.96 - 0.8 * step - 0.05 * rng.uniform());
    quality[v.id] = q;

    RatingsRecord r;
    r.video_id = v.id;
    r.frame_grade = detail::jitter_grade(v.grade, rng);
    r.segment_grade = detail::jitter_grade(v.grade, rng);
    r.video_grade = detail::jitter_grade(v.grade, rng);
    r.naturalness_grade = static_cast<int>(rng.below(5)) + 1;
    ratings[v.id] = r;
  }
  io::write_file_text(dir / "benchmark.jsonl", io::format_benchmark(bench));
  io::write_file_text(dir / "quality.csv", io::format_quality(quality));
  io::write_file_text(dir / "ratings.csv", io::format_ratings(ratings));
  return plan;
}

}  // namespace devil::synth
