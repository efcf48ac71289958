#pragma once

#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "devil/alignment/linear_model.hpp"
#include "devil/alignment/model_io.hpp"
#include "devil/alignment/split.hpp"
#include "devil/core/report.hpp"
#include "devil/core/tables.hpp"
#include "devil/metrics/correlation.hpp"
#include "devil/pipeline/config.hpp"

namespace devil::pipeline {

[[nodiscard]] inline int rated_grade(const RatingsRecord& r, alignment::Granularity g) {
  switch (g) {
    case alignment::Granularity::Frame: return r.frame_grade;
    case alignment::Granularity::Segment: return r.segment_grade;
    case alignment::Granularity::Video: return r.video_grade;
  }
  return r.video_grade;
}

namespace detail {

template <typename F>
std::optional<double> defined_or_null(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UndefinedMetric) return std::nullopt;
    throw;
  }
}

}  // namespace detail

/// Joins scores with ratings, splits by seed, fits one model per granularity
/// on the training ids and evaluates it on the held-out ids.
[[nodiscard]] inline alignment::AlignmentArtifact fit_alignment(const EvaluationReport& scores,
                                                                const std::map<std::string, RatingsRecord>& ratings,
                                                                double train_fraction, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& [id, v] : scores.per_video) {
    if (ratings.contains(id)) ids.push_back(id);
  }
  if (ids.size() < 2) {
    throw Error(ErrorKind::Underdetermined, "only " + std::to_string(ids.size()) + " scored video(s) have ratings");
  }
  const auto split = alignment::split_train_test(ids, train_fraction, seed);

  alignment::AlignmentArtifact a;
  a.seed = seed;
  a.train_fraction = train_fraction;
  a.train_rows = split.train.size();
  a.test_rows = split.test.size();
  for (auto g : alignment::kGranularities) {
    std::vector<std::vector<double>> rows;
    std::vector<int> grades;
    for (const auto& id : split.train) {
      rows.push_back(alignment::features_of(scores.per_video.at(id).scores, g));
      grades.push_back(rated_grade(ratings.at(id), g));
    }
    auto model = alignment::fit_granularity_model(g, rows, grades);

    std::vector<double> predicted;
    std::vector<double> human;
    std::vector<int> human_grades;
    for (const auto& id : split.test) {
      predicted.push_back(model.apply(alignment::features_of(scores.per_video.at(id).scores, g)));
      human_grades.push_back(rated_grade(ratings.at(id), g));
      human.push_back(human_grades.back());
    }
    alignment::HeldOutStats stats;
    stats.rows = split.test.size();
    if (stats.rows >= 2) {
      stats.pearson = detail::defined_or_null([&] { return metrics::pearson(predicted, human); });
      stats.kendall = detail::defined_or_null([&] { return metrics::kendall(predicted, human); });
      stats.win_ratio = detail::defined_or_null([&] { return metrics::win_ratio(predicted, human_grades); });
    }
    a.held_out[std::string(alignment::to_string(g))] = stats;
    a.model.get(g) = std::move(model);
  }
  return a;
}

inline std::string format_statistic(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << *v;
  return s.str();
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (cfg.scores.empty() || cfg.ratings.empty() || cfg.output.empty()) {
    throw Error(ErrorKind::MissingInput, "fit needs scores, ratings and an output path");
  }
  const auto artifact = fit_alignment(read_report(cfg.scores), io::load_ratings(cfg.ratings), cfg.train_fraction,
                                      cfg.seed);
  alignment::write_alignment(artifact, cfg.output);
  out << "trained on " << artifact.train_rows << " video(s), held out " << artifact.test_rows << "\n";
  out << "granularity  pearson    kendall    win_ratio\n";
  for (auto g : alignment::kGranularities) {
    const auto& h = artifact.held_out.at(std::string(alignment::to_string(g)));
    out << std::left << std::setw(13) << alignment::to_string(g) << std::setw(11) << format_statistic(h.pearson)
        << std::setw(11) << format_statistic(h.kendall) << format_statistic(h.win_ratio) << "\n";
  }
  return 0;
}

}  // namespace devil::pipeline
