#pragma once

#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "devil/alignment/model_io.hpp"
#include "devil/core/report.hpp"
#include "devil/core/tables.hpp"
#include "devil/metrics/controllability.hpp"
#include "devil/metrics/correlation.hpp"
#include "devil/metrics/naturalness.hpp"
#include "devil/metrics/quality.hpp"
#include "devil/metrics/range.hpp"
#include "devil/pipeline/config.hpp"
#include "devil/pipeline/fit.hpp"
#include "devil/pipeline/naturalness.hpp"

namespace devil::pipeline {

inline constexpr std::string_view kCompositeColumn = "composite";

/// Quality columns correlated against the overall score, in output order.
[[nodiscard]] inline std::vector<std::string> quality_columns() {
  std::vector<std::string> out;
  for (auto m : kAllQualityMetrics) out.emplace_back(to_string(m));
  out.emplace_back(kCompositeColumn);
  return out;
}

/// Pearson and Kendall between the overall score and each quality column,
/// over the videos that have a value in that column. Undefined cells are null.
[[nodiscard]] inline nlohmann::json correlate_columns(const std::vector<std::pair<double, QualityRecord>>& rows) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& column : quality_columns()) {
    std::vector<double> s;
    std::vector<double> q;
    for (const auto& [score, rec] : rows) {
      std::optional<double> v;
      if (column == kCompositeColumn) {
        v = detail::defined_or_null([&]() -> double {
          try {
            return metrics::composite_quality(rec);
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::MissingInput) throw Error(ErrorKind::UndefinedMetric, e.what());
            throw;
          }
        });
      } else {
        for (auto m : kAllQualityMetrics) {
          if (to_string(m) == column) v = rec.get(m);
        }
      }
      if (v) {
        s.push_back(score);
        q.push_back(*v);
      }
    }
    std::optional<double> p;
    std::optional<double> k;
    if (s.size() >= 2) {
      p = detail::defined_or_null([&] { return metrics::pearson(s, q); });
      k = detail::defined_or_null([&] { return metrics::kendall(s, q); });
    }
    out[column] = {{"n", s.size()},
                   {"pearson", p ? nlohmann::json(*p) : nlohmann::json(nullptr)},
                   {"kendall", k ? nlohmann::json(*k) : nlohmann::json(nullptr)}};
  }
  return out;
}

/// Quality table with the naturalness column replaced by graded levels where available.
[[nodiscard]] inline std::map<std::string, QualityRecord> merge_naturalness(
    std::map<std::string, QualityRecord> table, const std::map<std::string, metrics::NaturalnessLevel>& levels) {
  for (const auto& [id, level] : levels) {
    auto& rec = table[id];
    rec.video_id = id;
    rec.naturalness = metrics::naturalness_level_to_score(level);
  }
  return table;
}

struct EvaluateInputs {
  EvaluationReport scores;
  alignment::AlignmentArtifact alignment;
  std::vector<BenchmarkEntry> benchmark;
  std::optional<std::map<std::string, QualityRecord>> quality;
  std::optional<std::map<std::string, metrics::NaturalnessLevel>> naturalness;
};

[[nodiscard]] inline EvaluationReport evaluate(const EvaluateInputs& in) {
  std::map<std::string, int> grades;
  for (const auto& b : in.benchmark) grades[b.id] = b.grade;
  std::optional<std::map<std::string, QualityRecord>> quality = in.quality;
  if (quality && in.naturalness) quality = merge_naturalness(*quality, *in.naturalness);

  EvaluationReport r;
  r.failures = in.scores.failures;
  std::vector<metrics::ScoredVideo> scored;
  std::vector<std::pair<double, QualityRecord>> quality_rows;
  std::vector<metrics::NaturalnessLevel> levels;
  for (const auto& [id, source] : in.scores.per_video) {
    const auto g = grades.find(id);
    if (g == grades.end()) {
      r.unmatched.push_back(id);
      continue;
    }
    VideoEntry v = source;
    v.grade = g->second;
    alignment::apply_alignment(in.alignment.model, v.scores);
    metrics::ScoredVideo sv{id, g->second, *v.scores.overall, std::nullopt};
    if (quality) {
      const auto q = quality->find(id);
      if (q == quality->end()) throw Error(ErrorKind::MissingInput, "no quality record for video '" + id + "'");
      v.quality = metrics::composite_quality(q->second);
      sv.quality = v.quality;
      quality_rows.emplace_back(sv.score, q->second);
    }
    if (in.naturalness) {
      if (auto l = in.naturalness->find(id); l != in.naturalness->end()) {
        v.naturalness = std::string(metrics::to_string(l->second));
        levels.push_back(l->second);
      }
    }
    scored.push_back(sv);
    r.per_video[id] = std::move(v);
  }

  auto& m = r.model_metrics;
  m.videos = scored.size();
  std::vector<double> s;
  std::vector<int> gs;
  for (const auto& v : scored) {
    s.push_back(v.score);
    gs.push_back(v.grade);
  }
  if (s.size() >= 2) m.d_range = metrics::dynamics_range(s);
  m.d_control = detail::defined_or_null([&] { return metrics::dynamics_controllability(gs, s); });
  if (quality) {
    m.d_quality = metrics::dynamics_based_quality(scored);
    const auto lv = metrics::quality_at_levels(scored);
    m.d_quality_low = lv.low;
    m.d_quality_mid = lv.mid;
    m.d_quality_high = lv.high;
    r.correlations = correlate_columns(quality_rows);
  }
  if (!levels.empty()) m.naturalness = metrics::aggregate_naturalness(levels);
  return r;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.scores.empty() || cfg.alignment.empty() || cfg.benchmark.empty() || cfg.output.empty()) {
    throw Error(ErrorKind::MissingInput, "evaluate needs scores, an alignment model, a benchmark and an output path");
  }
  EvaluateInputs in{read_report(cfg.scores), alignment::read_alignment(cfg.alignment), io::load_benchmark(cfg.benchmark),
                    std::nullopt, std::nullopt};
  if (!cfg.quality.empty()) in.quality = io::load_quality(cfg.quality);
  if (!cfg.naturalness.empty()) in.naturalness = read_naturalness(cfg.naturalness);

  auto r = evaluate(in);
  auto opt = [](const std::filesystem::path& p) { return p.empty() ? nlohmann::json(nullptr) : nlohmann::json(p.string()); };
  r.config = {{"command", "evaluate"},
              {"model_name", cfg.model_name.empty() ? nlohmann::json(nullptr) : nlohmann::json(cfg.model_name)},
              {"scores", cfg.scores.string()},
              {"alignment", cfg.alignment.string()},
              {"alignment_seed", in.alignment.seed},
              {"alignment_scope", "shared"},
              {"benchmark", cfg.benchmark.string()},
              {"quality", opt(cfg.quality)},
              {"naturalness", opt(cfg.naturalness)},
              {"quality_intervals", metrics::kFullRangeBinning.intervals},
              {"scoring", in.scores.config}};
  write_report(r, cfg.output);

  const auto& m = r.model_metrics;
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << 100.0 * *v << "%";
    return s.str();
  };
  out << "videos " << m.videos << ", unmatched " << r.unmatched.size() << "\n"
      << "D_range " << pct(m.d_range) << "  D_control " << pct(m.d_control) << "  D_quality " << pct(m.d_quality)
      << " (L " << pct(m.d_quality_low) << " / M " << pct(m.d_quality_mid) << " / H " << pct(m.d_quality_high)
      << ")  naturalness " << pct(m.naturalness) << "\n";
  return 0;
}

}  // namespace devil::pipeline
