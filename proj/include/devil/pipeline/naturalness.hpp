#pragma once

#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>  // must precede httplib: <resolv.h> defines _res, an Eigen parameter name
#include "httplib.h"
#include "json.hpp"

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/frames_io.hpp"
#include "devil/core/image_io.hpp"
#include "devil/core/random.hpp"
#include "devil/metrics/naturalness.hpp"
#include "devil/pipeline/config.hpp"
#include "devil/pipeline/score.hpp"

namespace devil::pipeline {

inline constexpr std::size_t kNaturalnessFrames = 8;
inline constexpr int kNaturalnessAttempts = 3;

/// Indices of `count` frames spread evenly from first to last (rounded).
[[nodiscard]] inline std::vector<std::size_t> sample_frame_indices(std::size_t n, std::size_t count) {
  std::vector<std::size_t> out;
  if (n == 0 || count == 0) return out;
  if (count == 1) return {0};
  for (std::size_t k = 0; k < count; ++k) out.push_back((2 * k * (n - 1) + (count - 1)) / (2 * (count - 1)));
  return out;
}

/// Deterministic stand-in for the endpoint: a level chosen by hashing the id.
[[nodiscard]] inline metrics::NaturalnessLevel mock_naturalness(std::string_view video_id) {
  return metrics::kNaturalnessLevels[fnv1a64(video_id) % metrics::kNaturalnessLevels.size()];
}

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

[[nodiscard]] inline Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorKind::Validation, "endpoint must be an http(s) URL: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

/// JSON request body: {"frames": [base64 PNG, ...], "instruction": "..."}.
[[nodiscard]] inline std::string naturalness_request(const FrameSequence& video, const std::string& instruction) {
  nlohmann::json body;
  body["frames"] = nlohmann::json::array();
  for (auto i : sample_frame_indices(video.size(), kNaturalnessFrames)) {
    const auto png = io::encode_png(video.frames[i]);
    body["frames"].push_back(httplib::detail::base64_encode(std::string(png.begin(), png.end())));
  }
  body["instruction"] = instruction;
  return body.dump();
}

/// Posts one request with retries and returns the response body.
[[nodiscard]] inline std::string post_with_retry(const RunConfig& cfg, const std::string& body) {
  const auto ep = split_endpoint(cfg.endpoint);
  httplib::Client client(ep.base);
  client.set_connection_timeout(10);
  client.set_read_timeout(120);
  httplib::Headers headers;
  if (const char* token = std::getenv(cfg.credential_env.c_str()); token != nullptr && *token != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  std::string last_error;
  for (int attempt = 0; attempt < kNaturalnessAttempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(cfg.retry_backoff_ms << (attempt - 1)));
    auto res = client.Post(ep.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      return res->body;
    }
  }
  throw Error(ErrorKind::Transport,
              "gave up after " + std::to_string(kNaturalnessAttempts) + " attempts: " + last_error);
}

struct NaturalnessResult {
  std::map<std::string, metrics::NaturalnessLevel> levels;
  std::map<std::string, std::string> failures;
  std::optional<double> aggregate;
};

[[nodiscard]] inline NaturalnessResult grade_naturalness(const RunConfig& cfg) {
  if (!cfg.mock && cfg.endpoint.empty()) throw Error(ErrorKind::MissingInput, "naturalness needs an endpoint or --mock");
  NaturalnessResult r;
  for (const auto& [id, path] : discover_videos(cfg.videos)) {
    try {
      if (cfg.mock) {
        r.levels[id] = mock_naturalness(id);
        continue;
      }
      const auto text = post_with_retry(cfg, naturalness_request(io::load_frames(path), cfg.instruction));
      const auto level = metrics::find_naturalness_level(text);
      if (!level) throw Error(ErrorKind::Parse, "no naturalness level in response");
      r.levels[id] = *level;
    } catch (const std::exception& e) {
      r.failures[id] = e.what();
    }
  }
  if (!r.levels.empty()) {
    std::vector<metrics::NaturalnessLevel> all;
    for (const auto& [id, l] : r.levels) all.push_back(l);
    r.aggregate = metrics::aggregate_naturalness(all);
  }
  return r;
}

[[nodiscard]] inline nlohmann::json to_json(const NaturalnessResult& r, const RunConfig& cfg) {
  nlohmann::json j;
  j["videos"] = nlohmann::json::object();
  for (const auto& [id, l] : r.levels) {
    j["videos"][id] = {{"level", std::string(metrics::to_string(l))},
                       {"score", metrics::naturalness_level_to_score(l)}};
  }
  j["failures"] = r.failures;
  j["aggregate"] = r.aggregate ? nlohmann::json(*r.aggregate) : nlohmann::json(nullptr);
  j["config"] = {{"command", "naturalness"},
                 {"videos", path_list(cfg.videos)},
                 {"mock", cfg.mock},
                 {"endpoint", cfg.mock ? nlohmann::json(nullptr) : nlohmann::json(cfg.endpoint)},
                 {"instruction", cfg.instruction},
                 {"frames_per_video", kNaturalnessFrames}};
  return j;
}

/// Video id -> level from a file written by cmd_naturalness.
[[nodiscard]] inline std::map<std::string, metrics::NaturalnessLevel> read_naturalness(
    const std::filesystem::path& path) {
  std::map<std::string, metrics::NaturalnessLevel> out;
  try {
    const auto j = nlohmann::json::parse(io::read_file_text(path));
    for (const auto& [id, v] : j.at("videos").items()) {
      out[id] = metrics::parse_naturalness_level(v.at("level").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, path.string() + ": " + e.what());
  }
  return out;
}

inline int cmd_naturalness(const RunConfig& cfg, std::ostream& out) {
  if (cfg.output.empty()) throw Error(ErrorKind::MissingInput, "naturalness needs an output path");
  const auto r = grade_naturalness(cfg);
  io::write_file_text(cfg.output, to_json(r, cfg).dump(2) + "\n");
  out << "graded " << r.levels.size() << " video(s), " << r.failures.size() << " failed";
  if (r.aggregate) out << ", mean naturalness " << *r.aggregate;
  out << "\n";
  for (const auto& [id, msg] : r.failures) out << "  " << id << ": " << msg << "\n";
  return r.levels.empty() ? 1 : 0;
}

}  // namespace devil::pipeline
