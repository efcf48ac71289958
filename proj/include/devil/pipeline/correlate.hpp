#pragma once

#include <iomanip>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "devil/core/report.hpp"
#include "devil/core/tables.hpp"
#include "devil/pipeline/config.hpp"
#include "devil/pipeline/evaluate.hpp"

namespace devil::pipeline {

[[nodiscard]] inline std::string model_name_of(const EvaluationReport& r, const std::filesystem::path& path) {
  if (r.config.contains("model_name") && r.config.at("model_name").is_string()) {
    return r.config.at("model_name").get<std::string>();
  }
  return path.stem().string();
}

/// Per-model correlations between overall score and each quality column, and
/// their mean over the models where a cell is defined.
[[nodiscard]] inline nlohmann::json correlate_models(const std::map<std::string, EvaluationReport>& models,
                                                     const std::map<std::string, QualityRecord>& quality) {
  nlohmann::json out;
  out["models"] = nlohmann::json::object();
  for (const auto& [name, report] : models) {
    std::vector<std::pair<double, QualityRecord>> rows;
    for (const auto& [id, v] : report.per_video) {
      const auto q = quality.find(id);
      if (v.scores.overall && q != quality.end()) rows.emplace_back(*v.scores.overall, q->second);
    }
    out["models"][name] = correlate_columns(rows);
  }
  out["average"] = nlohmann::json::object();
  for (const auto& column : quality_columns()) {
    for (const char* stat : {"pearson", "kendall"}) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& [name, cells] : out["models"].items()) {
        const auto& v = cells.at(column).at(stat);
        if (v.is_number()) {
          sum += v.get<double>();
          ++count;
        }
      }
      out["average"][column][stat] = count > 0 ? nlohmann::json(sum / static_cast<double>(count)) : nlohmann::json(nullptr);
    }
  }
  return out;
}

inline int cmd_correlate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.reports.empty() || cfg.quality.empty() || cfg.output.empty()) {
    throw Error(ErrorKind::MissingInput, "correlate needs at least one report, a quality table and an output path");
  }
  std::map<std::string, EvaluationReport> models;
  for (const auto& p : cfg.reports) {
    auto r = read_report(p);
    auto name = model_name_of(r, p);
    if (!models.emplace(name, std::move(r)).second) {
      throw Error(ErrorKind::Validation, "two reports share the model name '" + name + "'");
    }
  }
  auto quality = io::load_quality(cfg.quality);
  if (!cfg.naturalness.empty()) quality = merge_naturalness(std::move(quality), read_naturalness(cfg.naturalness));

  auto table = correlate_models(models, quality);
  table["config"] = {{"command", "correlate"},
                     {"reports", path_list(cfg.reports)},
                     {"quality", cfg.quality.string()},
                     {"naturalness", cfg.naturalness.empty() ? nlohmann::json(nullptr)
                                                             : nlohmann::json(cfg.naturalness.string())}};
  io::write_file_text(cfg.output, table.dump(2) + "\n");

  auto cell = [](const nlohmann::json& v) {
    if (!v.is_number()) return std::string("undefined");
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v.get<double>();
    return s.str();
  };
  out << std::left << std::setw(16) << "model" << std::setw(24) << "column" << std::setw(11) << "pearson"
      << "kendall\n";
  auto print = [&](const std::string& name, const nlohmann::json& cells) {
    for (const auto& column : quality_columns()) {
      out << std::setw(16) << name << std::setw(24) << column << std::setw(11) << cell(cells.at(column).at("pearson"))
          << cell(cells.at(column).at("kendall")) << "\n";
    }
  };
  for (const auto& [name, cells] : table["models"].items()) print(name, cells);
  print("average", table["average"]);
  return 0;
}

}  // namespace devil::pipeline
