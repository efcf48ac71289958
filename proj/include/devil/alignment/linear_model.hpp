#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"

namespace devil::alignment {

enum class Granularity { Frame, Segment, Video };

inline constexpr std::array<Granularity, 3> kGranularities = {Granularity::Frame, Granularity::Segment,
                                                              Granularity::Video};

constexpr std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Frame: return "frame";
    case Granularity::Segment: return "segment";
    case Granularity::Video: return "video";
  }
  return "unknown";
}

inline Granularity granularity_from_string(std::string_view s) {
  for (auto g : kGranularities) {
    if (to_string(g) == s) return g;
  }
  throw Error(ErrorKind::Format, "unknown granularity '" + std::string(s) + "'");
}

/// Raw score names feeding each granularity, in feature order.
inline std::vector<std::string> feature_names(Granularity g) {
  switch (g) {
    case Granularity::Frame: return {"s_ofs", "s_sd", "s_pd"};
    case Granularity::Segment: return {"s_pa", "s_ga"};
    case Granularity::Video: return {"s_te", "s_tsd"};
  }
  return {};
}

inline std::vector<double> features_of(const DynamicsScoreSet& s, Granularity g) {
  switch (g) {
    case Granularity::Frame: return s.frame_features();
    case Granularity::Segment: return s.segment_features();
    case Granularity::Video: return s.video_features();
  }
  return {};
}

/// Human grade 1..5 mapped onto [0,1].
[[nodiscard]] constexpr double grade_to_target(int grade) { return (grade - 1) / 4.0; }

inline constexpr double kRidgeLambda = 1e-8;

/// Affine model over min-max normalised inputs. Bounds are captured at fit
/// time; inputs outside them extrapolate linearly and only the output is clamped.
struct LinearModel {
  Granularity granularity = Granularity::Frame;
  std::vector<double> weights;
  double intercept = 0.0;
  std::vector<double> input_min;
  std::vector<double> input_max;
  bool ridge_fallback = false;

  [[nodiscard]] std::size_t feature_count() const { return weights.size(); }

  [[nodiscard]] double normalize(std::size_t j, double x) const {
    const double span = input_max[j] - input_min[j];
    return span > 0.0 ? (x - input_min[j]) / span : 0.0;
  }

  /// Unclamped affine output.
  [[nodiscard]] double predict_raw(std::span<const double> x) const {
    if (x.size() != weights.size()) {
      throw Error(ErrorKind::Inconsistency, std::string(to_string(granularity)) + " model expects " +
                                                std::to_string(weights.size()) + " features, got " +
                                                std::to_string(x.size()));
    }
    double y = intercept;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!std::isfinite(x[j])) throw Error(ErrorKind::Validation, "non-finite subscore");
      y += weights[j] * normalize(j, x[j]);
    }
    return y;
  }

  /// Aligned score in [0,1].
  [[nodiscard]] double apply(std::span<const double> x) const { return std::clamp(predict_raw(x), 0.0, 1.0); }

  bool operator==(const LinearModel&) const = default;
};

/// Ordinary least squares with intercept on normalised features, solved via
/// the normal equations. A rank-deficient system is retried with a ridge term
/// on the weights (not the intercept).
[[nodiscard]] inline LinearModel fit_targets(Granularity g, const std::vector<std::vector<double>>& rows,
                                             std::span<const double> targets) {
  if (rows.size() != targets.size()) throw Error(ErrorKind::Inconsistency, "rows and targets differ in length");
  if (rows.empty()) {
    throw Error(ErrorKind::Underdetermined, std::string(to_string(g)) + " model: no training rows");
  }
  const std::size_t p = rows.front().size();
  if (rows.size() < p + 1) {
    throw Error(ErrorKind::Underdetermined, std::string(to_string(g)) + " model needs at least " +
                                                std::to_string(p + 1) + " rows, got " + std::to_string(rows.size()));
  }
  LinearModel model;
  model.granularity = g;
  model.input_min.assign(p, 0.0);
  model.input_max.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    model.input_min[j] = model.input_max[j] = rows.front()[j];
  }
  for (const auto& r : rows) {
    if (r.size() != p) throw Error(ErrorKind::Inconsistency, "ragged feature rows");
    for (std::size_t j = 0; j < p; ++j) {
      if (!std::isfinite(r[j])) throw Error(ErrorKind::Validation, "non-finite subscore in training rows");
      model.input_min[j] = std::min(model.input_min[j], r[j]);
      model.input_max[j] = std::max(model.input_max[j], r[j]);
    }
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto cols = static_cast<Eigen::Index>(p + 1);
  Eigen::MatrixXd x(n, cols);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) x(i, static_cast<Eigen::Index>(j)) = model.normalize(j, rows[static_cast<std::size_t>(i)][j]);
    x(i, cols - 1) = 1.0;
    y(i) = targets[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd xtx = x.transpose() * x;
  const Eigen::VectorXd xty = x.transpose() * y;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
  Eigen::VectorXd beta;
  if (lu.rank() == cols) {
    beta = lu.solve(xty);
  } else {
    for (Eigen::Index j = 0; j + 1 < cols; ++j) xtx(j, j) += kRidgeLambda;
    beta = xtx.ldlt().solve(xty);
    model.ridge_fallback = true;
  }
  model.weights.resize(p);
  for (std::size_t j = 0; j < p; ++j) model.weights[j] = beta(static_cast<Eigen::Index>(j));
  model.intercept = beta(cols - 1);
  return model;
}

[[nodiscard]] inline LinearModel fit_granularity_model(Granularity g, const std::vector<std::vector<double>>& rows,
                                                       std::span<const int> grades) {
  std::vector<double> targets;
  targets.reserve(grades.size());
  for (int grade : grades) {
    if (!is_valid_grade(grade)) throw Error(ErrorKind::Validation, "grade " + std::to_string(grade) + " outside 1..5");
    targets.push_back(grade_to_target(grade));
  }
  return fit_targets(g, rows, targets);
}

/// Three per-granularity models; S = (S_f + S_s + S_v) / 3.
struct AlignmentModel {
  LinearModel frame;
  LinearModel segment;
  LinearModel video;

  [[nodiscard]] const LinearModel& get(Granularity g) const {
    switch (g) {
      case Granularity::Frame: return frame;
      case Granularity::Segment: return segment;
      case Granularity::Video: return video;
    }
    return frame;
  }
  [[nodiscard]] LinearModel& get(Granularity g) {
    return const_cast<LinearModel&>(static_cast<const AlignmentModel&>(*this).get(g));
  }
  bool operator==(const AlignmentModel&) const = default;
};

[[nodiscard]] inline double overall_dynamics_score(double s_f, double s_s, double s_v) {
  return (s_f + s_s + s_v) / 3.0;
}

/// Fills the aligned fields of `scores` in place and returns it.
inline DynamicsScoreSet& apply_alignment(const AlignmentModel& model, DynamicsScoreSet& scores) {
  scores.s_f = model.frame.apply(scores.frame_features());
  scores.s_s = model.segment.apply(scores.segment_features());
  scores.s_v = model.video.apply(scores.video_features());
  scores.overall = overall_dynamics_score(*scores.s_f, *scores.s_s, *scores.s_v);
  return scores;
}

}  // namespace devil::alignment
