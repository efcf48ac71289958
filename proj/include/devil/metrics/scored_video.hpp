#pragma once

#include <optional>
#include <string>

namespace devil::metrics {

struct ScoredVideo {
  std::string video_id;
  int grade = 1;         // prompt dynamics grade, 1..5
  double score = 0.0;    // overall dynamics score S in [0,1]
  std::optional<double> quality;  // composite quality in [0,1]
};

}  // namespace devil::metrics
