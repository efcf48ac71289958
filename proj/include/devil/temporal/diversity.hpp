#pragma once

#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/types.hpp"
#include "devil/temporal/similarity.hpp"

namespace devil::temporal {

/// Mean squared distance of the frame embeddings from their mean embedding.
[[nodiscard]] inline double temporal_semantic_diversity(const FeatureMatrix& embeddings) {
  if (embeddings.rows < 1) throw Error(ErrorKind::MissingInput, "no frame embeddings");
  std::vector<double> mean(embeddings.dim, 0.0);
  for (std::size_t i = 0; i < embeddings.rows; ++i) {
    const auto r = embeddings.row(i);
    for (std::size_t j = 0; j < embeddings.dim; ++j) mean[j] += r[j];
  }
  for (auto& m : mean) m /= static_cast<double>(embeddings.rows);
  double total = 0.0;
  for (std::size_t i = 0; i < embeddings.rows; ++i) {
    const auto r = embeddings.row(i);
    for (std::size_t j = 0; j < embeddings.dim; ++j) {
      const double d = r[j] - mean[j];
      total += d * d;
    }
  }
  return total / static_cast<double>(embeddings.rows);
}

/// Copies a rank-2 tensor into double-precision rows.
[[nodiscard]] inline FeatureRows rows_of(const Tensor& t) {
  if (t.rank() != 2) throw Error(ErrorKind::Format, "expected a rank-2 tensor");
  FeatureRows out(t.dim(0), t.dim(1));
  for (std::size_t i = 0; i < t.data.size(); ++i) out.data[i] = t.data[i];
  return out;
}

[[nodiscard]] inline double temporal_semantic_diversity(const EmbeddingBundle& bundle) {
  if (!bundle.frame_embeddings) throw Error(ErrorKind::MissingInput, "frame_embeddings section is absent");
  return temporal_semantic_diversity(rows_of(*bundle.frame_embeddings).view());
}

}  // namespace devil::temporal
