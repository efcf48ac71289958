#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "devil/core/embeddings_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/frames_io.hpp"
#include "devil/core/report.hpp"
#include "devil/frame/scores.hpp"
#include "devil/pipeline/config.hpp"
#include "devil/temporal/aperiodicity.hpp"
#include "devil/temporal/diversity.hpp"
#include "devil/temporal/entropy.hpp"
#include "devil/temporal/luma_features.hpp"

namespace devil::pipeline {

/// Video id -> frame source, from `<id>.devf` files and `<id>/` frame
/// directories directly under each root.
[[nodiscard]] inline std::map<std::string, std::filesystem::path> discover_videos(
    const std::vector<std::filesystem::path>& roots) {
  if (roots.empty()) throw Error(ErrorKind::MissingInput, "no video directories given");
  std::map<std::string, std::filesystem::path> out;
  for (const auto& root : roots) {
    if (!std::filesystem::is_directory(root)) throw Error(ErrorKind::Io, "not a directory: " + root.string());
    for (const auto& e : std::filesystem::directory_iterator(root)) {
      std::string id;
      if (e.is_directory()) {
        id = e.path().filename().string();
      } else if (e.path().extension() == ".devf") {
        id = e.path().stem().string();
      } else {
        continue;
      }
      if (!out.emplace(id, e.path()).second) throw Error(ErrorKind::Validation, "duplicate video id '" + id + "'");
    }
  }
  return out;
}

/// All seven raw scores for one video. Sections missing from the bundle are
/// replaced by the built-in estimators and the substitution is noted in `sources`.
[[nodiscard]] inline VideoEntry score_video(const FrameSequence& video, const EmbeddingBundle& bundle,
                                            const RunConfig& cfg) {
  video.validate();
  const auto luma = video.luma();
  const std::size_t n = video.size();
  auto check_frames = [n](const std::optional<Tensor>& t, const char* what) {
    if (t && t->dim(0) != n) {
      throw Error(ErrorKind::Inconsistency, std::string(what) + " has " + std::to_string(t->dim(0)) +
                                                " frames, video has " + std::to_string(n));
    }
  };
  check_frames(bundle.frame_embeddings, "frame_embeddings");
  check_frames(bundle.patch_maps, "patch_maps");

  VideoEntry v;
  auto& s = v.scores;
  if (bundle.flow_fields) {
    s.s_ofs = frame::optical_flow_strength(*bundle.flow_fields, n, video.height, video.width);
    v.sources["flow_source"] = "devb";
  } else {
    s.s_ofs = frame::optical_flow_strength(luma);
    v.sources["flow_source"] = "builtin";
  }
  s.s_sd = frame::structural_dynamics(luma);
  s.s_pd = frame::perceptual_dynamics(luma);

  if (bundle.patch_maps) {
    s.s_pa = temporal::patch_aperiodicity(*bundle.patch_maps);
    v.sources["patch_source"] = "devb";
  } else {
    s.s_pa = temporal::patch_aperiodicity(temporal::luma_patch_grid(luma));
    v.sources["patch_source"] = "luma_fallback";
  }

  if (bundle.segment_embeddings) {
    s.s_ga = temporal::global_aperiodicity(temporal::rows_of(*bundle.segment_embeddings).view());
    v.sources["segment_source"] = "devb";
  } else {
    s.s_ga = temporal::global_aperiodicity(temporal::luma_segment_embeddings(luma).view());
    v.sources["segment_source"] = "luma_fallback";
  }

  if (cfg.entropy_mode == EntropyMode::External) {
    s.s_te = temporal::temporal_entropy_external(video, temporal::EncoderCommand{cfg.encoder_command});
  } else {
    s.s_te = temporal::temporal_entropy_builtin(luma);
  }
  v.sources["entropy_source"] = std::string(to_string(cfg.entropy_mode));

  if (bundle.frame_embeddings) {
    s.s_tsd = temporal::temporal_semantic_diversity(bundle);
    v.sources["frame_embedding_source"] = "devb";
  } else {
    s.s_tsd = temporal::temporal_semantic_diversity(temporal::luma_frame_embeddings(luma).view());
    v.sources["frame_embedding_source"] = "luma_fallback";
  }
  return v;
}

/// Scores every discovered video on `cfg.workers` threads. Results are merged
/// by id, so the report does not depend on the worker count; per-video errors
/// land in `failures`.
[[nodiscard]] inline EvaluationReport score_videos(const RunConfig& cfg) {
  cfg.validate();
  const auto sources = discover_videos(cfg.videos);
  std::vector<std::pair<std::string, std::filesystem::path>> jobs(sources.begin(), sources.end());

  struct Outcome {
    std::optional<VideoEntry> entry;
    std::string error;
  };
  std::vector<Outcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& [id, path] = jobs[i];
      try {
        const auto video = io::load_frames(path);
        EmbeddingBundle bundle;
        if (!cfg.embeddings.empty()) {
          const auto devb = cfg.embeddings / (id + ".devb");
          if (std::filesystem::exists(devb)) bundle = io::load_embeddings(devb);
        }
        outcomes[i].entry = score_video(video, bundle, cfg);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t threads = std::min(cfg.workers, std::max<std::size_t>(jobs.size(), 1));
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  EvaluationReport r;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (outcomes[i].entry) {
      r.per_video[jobs[i].first] = std::move(*outcomes[i].entry);
    } else {
      r.failures[jobs[i].first] = outcomes[i].error;
    }
  }
  r.config = {{"command", "score"},
              {"videos", path_list(cfg.videos)},
              {"embeddings", cfg.embeddings.string()},
              {"seed", cfg.seed},
              {"entropy_mode", std::string(to_string(cfg.entropy_mode))},
              {"encoder_command", cfg.entropy_mode == EntropyMode::External ? nlohmann::json(cfg.encoder_command)
                                                                            : nlohmann::json(nullptr)}};
  return r;
}

/// Exit status 1 only when every video failed (or there were none).
inline int cmd_score(const RunConfig& cfg, std::ostream& out) {
  const auto report = score_videos(cfg);
  if (cfg.output.empty()) throw Error(ErrorKind::MissingInput, "score needs an output path");
  write_report(report, cfg.output);
  out << "scored " << report.per_video.size() << " video(s), " << report.failures.size() << " failed\n";
  for (const auto& [id, msg] : report.failures) out << "  " << id << ": " << msg << "\n";
  return report.per_video.empty() ? 1 : 0;
}

}  // namespace devil::pipeline
