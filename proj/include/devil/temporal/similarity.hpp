#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "devil/core/error.hpp"

namespace devil::temporal {

/// Row-major n x dim view over feature vectors.
struct FeatureMatrix {
  std::span<const double> data;
  std::size_t rows = 0;
  std::size_t dim = 0;

  [[nodiscard]] std::span<const double> row(std::size_t i) const { return data.subspan(i * dim, dim); }
};

/// Owning counterpart, convenient for building series from tensors.
struct FeatureRows {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t dim = 0;

  FeatureRows() = default;
  FeatureRows(std::size_t r, std::size_t d) : data(r * d, 0.0), rows(r), dim(d) {}

  [[nodiscard]] FeatureMatrix view() const { return {data, rows, dim}; }
  [[nodiscard]] std::span<double> row(std::size_t i) { return std::span<double>(data).subspan(i * dim, dim); }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data).subspan(i * dim, dim);
  }
};

[[nodiscard]] inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Squared L2 norm of every row; a zero row has no defined cosine similarity.
[[nodiscard]] inline std::vector<double> squared_norms(const FeatureMatrix& m) {
  std::vector<double> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const auto r = m.row(i);
    out[i] = dot(r, r);
    if (!(out[i] > 0.0) || !std::isfinite(out[i])) {
      throw Error(ErrorKind::UndefinedSimilarity, "feature vector " + std::to_string(i) + " has zero or invalid norm");
    }
  }
  return out;
}

/// Cosine similarity from a dot product and the two squared norms. Written as
/// dot / sqrt(|a|^2 |b|^2) so identical vectors give exactly 1.
[[nodiscard]] inline double cosine(double ab, double aa, double bb) { return ab / std::sqrt(aa * bb); }

}  // namespace devil::temporal
