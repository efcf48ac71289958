#pragma once

#include <ostream>

#include "devil/core/error.hpp"
#include "devil/pipeline/config.hpp"
#include "devil/synth/corpus.hpp"

namespace devil::pipeline {

inline int cmd_synth(const RunConfig& cfg, const synth::CorpusOptions& options, std::ostream& out) {
  if (cfg.output.empty()) throw Error(ErrorKind::MissingInput, "synth needs an output directory");
  auto o = options;
  o.seed = cfg.seed;
  const auto plan = synth::write_corpus(cfg.output, o);
  out << "wrote " << plan.size() << " video(s) to " << cfg.output.string() << "\n";
  return 0;
}

}  // namespace devil::pipeline
