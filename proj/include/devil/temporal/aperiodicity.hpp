#pragma once

#include <cstddef>
#include <string>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"
#include "devil/temporal/similarity.hpp"

namespace devil::temporal {

/// Minimal segment length used by the auto-correlation factor: floor(N/8).
[[nodiscard]] constexpr std::size_t default_min_lag_window(std::size_t n) { return n / 8; }

/// Auto-correlation factor of a series F_1..F_N:
///
///   ACF = 1/(N-K0) * sum_{k=K0}^{N-1} (1/k) * sum_{i=1}^{k} cos(F_i, F_{N-k+i})
///
/// i.e. the mean, over lags 1..N-K0, of the mean cosine similarity at that lag.
/// The k = N (lag 0) term is excluded so a constant series scores exactly 1.
[[nodiscard]] inline double acf(const FeatureMatrix& series, std::size_t k0) {
  const std::size_t n = series.rows;
  if (k0 < 1 || n < k0 + 1) {
    throw Error(ErrorKind::Validation, "acf needs K0 >= 1 and N >= K0 + 1 (N=" + std::to_string(n) +
                                           ", K0=" + std::to_string(k0) + ")");
  }
  const auto norms = squared_norms(series);
  double total = 0.0;
  for (std::size_t k = k0; k <= n - 1; ++k) {
    const std::size_t lag = n - k;
    double inner = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      inner += cosine(dot(series.row(i), series.row(i + lag)), norms[i], norms[i + lag]);
    }
    total += inner / static_cast<double>(k);
  }
  return total / static_cast<double>(n - k0);
}

[[nodiscard]] inline double acf(const FeatureMatrix& series) {
  return acf(series, default_min_lag_window(series.rows));
}

inline constexpr std::size_t kMinPatchFrames = 9;

/// 1 - mean ACF over all grid positions of an N x H' x W' x C' patch tensor.
[[nodiscard]] inline double patch_aperiodicity(const Tensor& patch_maps) {
  if (patch_maps.rank() != 4) throw Error(ErrorKind::Format, "patch_maps must have rank 4");
  const std::size_t n = patch_maps.dim(0);
  const std::size_t gh = patch_maps.dim(1);
  const std::size_t gw = patch_maps.dim(2);
  const std::size_t c = patch_maps.dim(3);
  if (n < kMinPatchFrames) {
    throw Error(ErrorKind::TooFewFrames,
                "patch aperiodicity needs at least " + std::to_string(kMinPatchFrames) + " frames, got " +
                    std::to_string(n));
  }
  FeatureRows series(n, c);
  double sum = 0.0;
  for (std::size_t h = 0; h < gh; ++h) {
    for (std::size_t w = 0; w < gw; ++w) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t base = ((i * gh + h) * gw + w) * c;
        auto dst = series.row(i);
        for (std::size_t j = 0; j < c; ++j) dst[j] = patch_maps.data[base + j];
      }
      sum += acf(series.view());
    }
  }
  return 1.0 - sum / static_cast<double>(gh * gw);
}

[[nodiscard]] inline double patch_aperiodicity(const EmbeddingBundle& bundle) {
  if (!bundle.patch_maps) throw Error(ErrorKind::MissingInput, "patch_maps section is absent");
  return patch_aperiodicity(*bundle.patch_maps);
}

/// 1 - mean cosine similarity over all ordered pairs (i, j != i) of segment embeddings.
[[nodiscard]] inline double global_aperiodicity(const FeatureMatrix& segments) {
  const std::size_t n = segments.rows;
  if (n < 2) throw Error(ErrorKind::Validation, "global aperiodicity needs at least 2 segments");
  const auto norms = squared_norms(segments);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum += cosine(dot(segments.row(i), segments.row(j)), norms[i], norms[j]);
    }
  }
  return 1.0 - sum / static_cast<double>(n * (n - 1));
}

}  // namespace devil::temporal
