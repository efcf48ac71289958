#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"
#include "devil/core/types.hpp"

namespace devil {

/// One video's row in a report. `sources` records where each input came from
/// (e.g. "patch_source" -> "luma_fallback").
struct VideoEntry {
  std::optional<int> grade;
  DynamicsScoreSet scores;
  std::optional<double> quality;
  std::optional<std::string> naturalness;
  std::map<std::string, std::string> sources;
  bool operator==(const VideoEntry&) const = default;
};

struct ModelMetrics {
  std::size_t videos = 0;
  std::optional<double> d_range;
  std::optional<double> d_control;
  std::optional<double> d_quality;
  std::optional<double> d_quality_low;
  std::optional<double> d_quality_mid;
  std::optional<double> d_quality_high;
  std::optional<double> naturalness;
  bool operator==(const ModelMetrics&) const = default;
};

struct EvaluationReport {
  std::map<std::string, VideoEntry> per_video;
  ModelMetrics model_metrics;
  nlohmann::json correlations = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> unmatched;
  std::map<std::string, std::string> failures;  // video id -> error message
  bool operator==(const EvaluationReport&) const = default;
};

namespace detail {

inline nlohmann::json number_or_null(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::optional<double> optional_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

inline void put_optional(nlohmann::json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

}  // namespace detail

inline constexpr std::array<const char*, 7> kRawScoreNames = {"s_ofs", "s_sd", "s_pd", "s_pa",
                                                              "s_ga",  "s_te", "s_tsd"};

[[nodiscard]] inline nlohmann::json to_json(const VideoEntry& v) {
  nlohmann::json j = nlohmann::json::object();
  const auto& s = v.scores;
  j["raw"] = {{"s_ofs", s.s_ofs}, {"s_sd", s.s_sd}, {"s_pd", s.s_pd}, {"s_pa", s.s_pa},
              {"s_ga", s.s_ga},   {"s_te", s.s_te}, {"s_tsd", s.s_tsd}};
  detail::put_optional(j, "s_f", s.s_f);
  detail::put_optional(j, "s_s", s.s_s);
  detail::put_optional(j, "s_v", s.s_v);
  detail::put_optional(j, "overall", s.overall);
  if (v.grade) j["grade"] = *v.grade;
  detail::put_optional(j, "quality", v.quality);
  if (v.naturalness) j["naturalness"] = *v.naturalness;
  j["sources"] = v.sources;
  return j;
}

[[nodiscard]] inline VideoEntry video_entry_from_json(const nlohmann::json& j) {
  VideoEntry v;
  const auto& raw = j.at("raw");
  auto& s = v.scores;
  s.s_ofs = raw.at("s_ofs").get<double>();
  s.s_sd = raw.at("s_sd").get<double>();
  s.s_pd = raw.at("s_pd").get<double>();
  s.s_pa = raw.at("s_pa").get<double>();
  s.s_ga = raw.at("s_ga").get<double>();
  s.s_te = raw.at("s_te").get<double>();
  s.s_tsd = raw.at("s_tsd").get<double>();
  s.s_f = detail::optional_number(j, "s_f");
  s.s_s = detail::optional_number(j, "s_s");
  s.s_v = detail::optional_number(j, "s_v");
  s.overall = detail::optional_number(j, "overall");
  if (j.contains("grade")) v.grade = j.at("grade").get<int>();
  v.quality = detail::optional_number(j, "quality");
  if (j.contains("naturalness")) v.naturalness = j.at("naturalness").get<std::string>();
  if (j.contains("sources")) v.sources = j.at("sources").get<std::map<std::string, std::string>>();
  return v;
}

[[nodiscard]] inline nlohmann::json to_json(const ModelMetrics& m) {
  return {{"videos", m.videos},
          {"d_range", detail::number_or_null(m.d_range)},
          {"d_control", detail::number_or_null(m.d_control)},
          {"d_quality", detail::number_or_null(m.d_quality)},
          {"d_quality_low", detail::number_or_null(m.d_quality_low)},
          {"d_quality_mid", detail::number_or_null(m.d_quality_mid)},
          {"d_quality_high", detail::number_or_null(m.d_quality_high)},
          {"naturalness", detail::number_or_null(m.naturalness)}};
}

[[nodiscard]] inline ModelMetrics model_metrics_from_json(const nlohmann::json& j) {
  ModelMetrics m;
  m.videos = j.value("videos", std::size_t{0});
  m.d_range = detail::optional_number(j, "d_range");
  m.d_control = detail::optional_number(j, "d_control");
  m.d_quality = detail::optional_number(j, "d_quality");
  m.d_quality_low = detail::optional_number(j, "d_quality_low");
  m.d_quality_mid = detail::optional_number(j, "d_quality_mid");
  m.d_quality_high = detail::optional_number(j, "d_quality_high");
  m.naturalness = detail::optional_number(j, "naturalness");
  return m;
}

[[nodiscard]] inline nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["per_video"] = nlohmann::json::object();
  for (const auto& [id, v] : r.per_video) j["per_video"][id] = to_json(v);
  j["model_metrics"] = to_json(r.model_metrics);
  j["correlations"] = r.correlations;
  j["config"] = r.config;
  j["unmatched"] = r.unmatched;
  j["failures"] = r.failures;
  return j;
}

/// Structural checks mirroring docs/report.schema.json.
inline void validate_report(const nlohmann::json& j) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::Format, "report: " + what); };
  if (!j.is_object()) fail("document is not an object");
  for (const char* key : {"per_video", "model_metrics", "correlations", "config"}) {
    if (!j.contains(key) || !j.at(key).is_object()) fail(std::string("missing object '") + key + "'");
  }
  for (const auto& [id, v] : j.at("per_video").items()) {
    if (!v.is_object() || !v.contains("raw") || !v.at("raw").is_object()) fail("video '" + id + "' lacks raw scores");
    for (const char* name : kRawScoreNames) {
      if (!v.at("raw").contains(name) || !v.at("raw").at(name).is_number()) {
        fail("video '" + id + "' lacks " + name);
      }
    }
    for (const char* key : {"s_f", "s_s", "s_v", "overall", "quality"}) {
      if (!v.contains(key)) continue;
      const auto& x = v.at(key);
      if (!x.is_number() || x.get<double>() < 0.0 || x.get<double>() > 1.0) {
        fail("video '" + id + "' field " + key + " outside [0,1]");
      }
    }
    if (v.contains("grade") && !(v.at("grade").is_number_integer() && is_valid_grade(v.at("grade").get<int>()))) {
      fail("video '" + id + "' has an invalid grade");
    }
  }
  for (const auto& [key, x] : j.at("model_metrics").items()) {
    if (key == "videos") {
      if (!x.is_number_unsigned()) fail("model_metrics.videos is not a count");
      continue;
    }
    if (x.is_null()) continue;
    if (!x.is_number() || x.get<double>() < 0.0 || x.get<double>() > 1.0) {
      fail("model_metrics." + key + " outside [0,1]");
    }
  }
  if (j.contains("unmatched") && !j.at("unmatched").is_array()) fail("unmatched is not a list");
}

[[nodiscard]] inline EvaluationReport report_from_json(const nlohmann::json& j) {
  validate_report(j);
  try {
    EvaluationReport r;
    for (const auto& [id, v] : j.at("per_video").items()) r.per_video[id] = video_entry_from_json(v);
    r.model_metrics = model_metrics_from_json(j.at("model_metrics"));
    r.correlations = j.at("correlations");
    r.config = j.at("config");
    if (j.contains("unmatched")) r.unmatched = j.at("unmatched").get<std::vector<std::string>>();
    if (j.contains("failures")) r.failures = j.at("failures").get<std::map<std::string, std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("report: ") + e.what());
  }
}

/// Keys are emitted in sorted order and numbers in shortest round-trip form,
/// so equal reports serialize to identical bytes.
[[nodiscard]] inline std::string format_report(const EvaluationReport& r) { return to_json(r).dump(2) + "\n"; }

inline void write_report(const EvaluationReport& r, const std::filesystem::path& path) {
  io::write_file_text(path, format_report(r));
}

[[nodiscard]] inline EvaluationReport read_report(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Format, path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace devil
