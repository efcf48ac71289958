#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "devil/core/binary_io.hpp"
#include "devil/core/error.hpp"

namespace devil::pipeline {

enum class EntropyMode { Builtin, External };

inline constexpr std::string_view kDefaultInstruction =
    "Watch these frames sampled from one video and grade how natural it looks. Answer with exactly one of: "
    "Almost Real, Slightly Unrealistic, Moderately Unrealistic, Noticeably Unrealistic, Completely Fictitious.";

/// Everything a command needs. Loaded from a JSON file and then overridden by
/// command-line flags; empty paths mean "not given".
struct RunConfig {
  std::vector<std::filesystem::path> videos;  // directories of <id>.devf files or <id>/ frame directories
  std::filesystem::path embeddings;           // directory of <id>.devb files
  std::filesystem::path benchmark;
  std::filesystem::path quality;
  std::filesystem::path ratings;
  std::filesystem::path alignment;  // fitted model file
  std::filesystem::path scores;     // output of `score`
  std::filesystem::path naturalness;
  std::vector<std::filesystem::path> reports;
  std::filesystem::path output;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  double train_fraction = 0.75;
  EntropyMode entropy_mode = EntropyMode::Builtin;
  std::string encoder_command;
  std::string endpoint;
  std::string credential_env = "DEVIL_MLLM_TOKEN";
  std::string instruction = std::string(kDefaultInstruction);
  std::size_t retry_backoff_ms = 500;
  std::string model_name;
  bool mock = false;

  void validate() const {
    if (workers < 1) throw Error(ErrorKind::Validation, "workers must be at least 1");
    if (entropy_mode == EntropyMode::External && encoder_command.empty()) {
      throw Error(ErrorKind::Validation, "external entropy mode needs an encoder command");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw Error(ErrorKind::Validation, "train_fraction must be in (0, 1)");
    }
  }
};

[[nodiscard]] inline std::string_view to_string(EntropyMode m) {
  return m == EntropyMode::External ? "external" : "builtin";
}

[[nodiscard]] inline EntropyMode entropy_mode_from_string(std::string_view s) {
  if (s == "builtin") return EntropyMode::Builtin;
  if (s == "external") return EntropyMode::External;
  throw Error(ErrorKind::Validation, "entropy mode must be builtin or external, got '" + std::string(s) + "'");
}

[[nodiscard]] inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    auto path = [&j](const char* key, std::filesystem::path& out) {
      if (j.contains(key)) out = j.at(key).get<std::string>();
    };
    auto paths = [&j](const char* key, std::vector<std::filesystem::path>& out) {
      if (!j.contains(key)) return;
      if (j.at(key).is_string()) {
        out = {j.at(key).get<std::string>()};
      } else {
        for (const auto& p : j.at(key)) out.emplace_back(p.get<std::string>());
      }
    };
    paths("videos", c.videos);
    path("embeddings", c.embeddings);
    path("benchmark", c.benchmark);
    path("quality", c.quality);
    path("ratings", c.ratings);
    path("alignment", c.alignment);
    path("scores", c.scores);
    path("naturalness", c.naturalness);
    paths("reports", c.reports);
    path("output", c.output);
    c.workers = j.value("workers", c.workers);
    c.seed = j.value("seed", c.seed);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    if (j.contains("entropy_mode")) c.entropy_mode = entropy_mode_from_string(j.at("entropy_mode").get<std::string>());
    c.encoder_command = j.value("encoder_command", c.encoder_command);
    c.endpoint = j.value("endpoint", c.endpoint);
    c.credential_env = j.value("credential_env", c.credential_env);
    c.instruction = j.value("instruction", c.instruction);
    c.retry_backoff_ms = j.value("retry_backoff_ms", c.retry_backoff_ms);
    c.model_name = j.value("model_name", c.model_name);
    c.mock = j.value("mock", c.mock);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("config: ") + e.what());
  }
  return c;
}

[[nodiscard]] inline RunConfig load_config(const std::filesystem::path& path) {
  try {
    return config_from_json(nlohmann::json::parse(io::read_file_text(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Format, path.string() + ": " + e.what());
  }
}

[[nodiscard]] inline nlohmann::json path_list(const std::vector<std::filesystem::path>& ps) {
  auto j = nlohmann::json::array();
  for (const auto& p : ps) j.push_back(p.string());
  return j;
}

}  // namespace devil::pipeline
