#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "devil/alignment/linear_model.hpp"
#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"

namespace devil::alignment {

/// Held-out statistics for one granularity; nullopt where undefined.
struct HeldOutStats {
  std::size_t rows = 0;
  std::optional<double> pearson;
  std::optional<double> kendall;
  std::optional<double> win_ratio;
  bool operator==(const HeldOutStats&) const = default;
};

/// A fitted AlignmentModel together with how it was produced.
struct AlignmentArtifact {
  AlignmentModel model;
  std::uint64_t seed = 0;
  double train_fraction = 0.75;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::map<std::string, HeldOutStats> held_out;  // keyed by granularity name
  bool operator==(const AlignmentArtifact&) const = default;
};

namespace detail {

inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace detail

[[nodiscard]] inline nlohmann::json to_json(const LinearModel& m) {
  nlohmann::json j;
  j["granularity"] = std::string(to_string(m.granularity));
  j["features"] = feature_names(m.granularity);
  j["weights"] = m.weights;
  j["intercept"] = m.intercept;
  j["input_min"] = m.input_min;
  j["input_max"] = m.input_max;
  j["ridge_fallback"] = m.ridge_fallback;
  return j;
}

[[nodiscard]] inline LinearModel linear_model_from_json(const nlohmann::json& j) {
  LinearModel m;
  m.granularity = granularity_from_string(j.at("granularity").get<std::string>());
  m.weights = j.at("weights").get<std::vector<double>>();
  m.intercept = j.at("intercept").get<double>();
  m.input_min = j.at("input_min").get<std::vector<double>>();
  m.input_max = j.at("input_max").get<std::vector<double>>();
  m.ridge_fallback = j.value("ridge_fallback", false);
  const auto expected = feature_names(m.granularity).size();
  if (m.weights.size() != expected || m.input_min.size() != expected || m.input_max.size() != expected) {
    throw Error(ErrorKind::Format, std::string(to_string(m.granularity)) + " model has wrong feature count");
  }
  for (std::size_t k = 0; k < expected; ++k) {
    if (!std::isfinite(m.weights[k]) || m.input_max[k] < m.input_min[k]) {
      throw Error(ErrorKind::Format, std::string(to_string(m.granularity)) + " model has invalid weights or bounds");
    }
  }
  return m;
}

[[nodiscard]] inline nlohmann::json to_json(const AlignmentArtifact& a) {
  nlohmann::json j;
  j["seed"] = a.seed;
  j["train_fraction"] = a.train_fraction;
  j["train_rows"] = a.train_rows;
  j["test_rows"] = a.test_rows;
  j["scope"] = "shared";
  for (auto g : kGranularities) {
    const auto name = std::string(to_string(g));
    j["models"][name] = to_json(a.model.get(g));
    if (auto it = a.held_out.find(name); it != a.held_out.end()) {
      j["held_out"][name] = {{"rows", it->second.rows},
                             {"pearson", detail::optional_number(it->second.pearson)},
                             {"kendall", detail::optional_number(it->second.kendall)},
                             {"win_ratio", detail::optional_number(it->second.win_ratio)}};
    }
  }
  return j;
}

[[nodiscard]] inline AlignmentArtifact alignment_from_json(const nlohmann::json& j) {
  try {
    AlignmentArtifact a;
    a.seed = j.at("seed").get<std::uint64_t>();
    a.train_fraction = j.at("train_fraction").get<double>();
    a.train_rows = j.at("train_rows").get<std::size_t>();
    a.test_rows = j.at("test_rows").get<std::size_t>();
    for (auto g : kGranularities) {
      const auto name = std::string(to_string(g));
      a.model.get(g) = linear_model_from_json(j.at("models").at(name));
      if (a.model.get(g).granularity != g) throw Error(ErrorKind::Format, "granularity tag mismatch for " + name);
      if (j.contains("held_out") && j["held_out"].contains(name)) {
        const auto& h = j["held_out"][name];
        a.held_out[name] = HeldOutStats{h.at("rows").get<std::size_t>(), detail::read_optional(h, "pearson"),
                                        detail::read_optional(h, "kendall"), detail::read_optional(h, "win_ratio")};
      }
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("alignment model: ") + e.what());
  }
}

inline void write_alignment(const AlignmentArtifact& a, const std::filesystem::path& path) {
  io::write_file_text(path, to_json(a).dump(2) + "\n");
}

[[nodiscard]] inline AlignmentArtifact read_alignment(const std::filesystem::path& path) {
  try {
    return alignment_from_json(nlohmann::json::parse(io::read_file_text(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Format, path.string() + ": " + e.what());
  }
}

}  // namespace devil::alignment
