#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "devil/core/error.hpp"
#include "devil/core/random.hpp"

namespace devil::alignment {

struct TrainTestSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

inline constexpr double kDefaultTrainFraction = 0.75;

/// Seeded partition with ceil(fraction * n) training ids. Ids are sorted
/// before shuffling so the result does not depend on input order; each side
/// is returned sorted.
[[nodiscard]] inline TrainTestSplit split_train_test(std::vector<std::string> ids, double fraction,
                                                     std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error(ErrorKind::Validation, "train fraction must be in (0,1)");
  if (ids.size() < 2) throw Error(ErrorKind::Validation, "need at least 2 ids to split");
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorKind::Validation, "duplicate ids in split input");
  }
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(ids));
  const auto n_train = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ids.size())));
  TrainTestSplit out;
  out.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace devil::alignment
