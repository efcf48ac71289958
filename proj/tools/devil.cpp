// devil: batch scoring and evaluation of video dynamics.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "devil/core/error.hpp"
#include "devil/pipeline/config.hpp"
#include "devil/pipeline/correlate.hpp"
#include "devil/pipeline/evaluate.hpp"
#include "devil/pipeline/fit.hpp"
#include "devil/pipeline/naturalness.hpp"
#include "devil/pipeline/score.hpp"
#include "devil/pipeline/synth.hpp"
#include "devil/temporal/entropy.hpp"

namespace {

using devil::pipeline::RunConfig;

// Values given on the command line; each overrides the config file when set.
struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool mock = false;
  std::string output;
  std::vector<std::string> videos;
  std::string embeddings, benchmark, quality, ratings, alignment, scores, naturalness;
  std::vector<std::string> reports;
  std::string entropy, encoder, endpoint, credential_env, instruction, model_name;
  double train_fraction = 0.75;
  devil::synth::CorpusOptions corpus;
  bool no_features = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Seed for splits and synthetic data");
  cmd->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--mock", f.mock, "Use the deterministic naturalness stand-in");
  cmd->add_option("-o,--out", f.output, "Output file or directory");
}

RunConfig resolve(const CLI::App& cmd, const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : devil::pipeline::load_config(f.config);
  auto given = [&cmd](const char* name) { return cmd.get_option_no_throw(name) != nullptr && cmd.count(name) > 0; };
  if (given("--seed")) c.seed = f.seed;
  if (given("--workers")) c.workers = f.workers;
  if (f.mock) c.mock = true;
  if (given("--out")) c.output = f.output;
  if (given("--videos")) c.videos.assign(f.videos.begin(), f.videos.end());
  if (given("--embeddings")) c.embeddings = f.embeddings;
  if (given("--benchmark")) c.benchmark = f.benchmark;
  if (given("--quality")) c.quality = f.quality;
  if (given("--ratings")) c.ratings = f.ratings;
  if (given("--model")) c.alignment = f.alignment;
  if (given("--scores")) c.scores = f.scores;
  if (given("--naturalness")) c.naturalness = f.naturalness;
  if (given("--report")) c.reports.assign(f.reports.begin(), f.reports.end());
  if (given("--entropy")) c.entropy_mode = devil::pipeline::entropy_mode_from_string(f.entropy);
  if (given("--encoder")) c.encoder_command = f.encoder;
  if (given("--endpoint")) c.endpoint = f.endpoint;
  if (given("--credential-env")) c.credential_env = f.credential_env;
  if (given("--instruction")) c.instruction = f.instruction;
  if (given("--name")) c.model_name = f.model_name;
  if (given("--train-fraction")) c.train_fraction = f.train_fraction;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics scores and model-level dynamics metrics for generated videos"};
  app.require_subcommand(1);
  Flags f;

  auto* score = app.add_subcommand("score", "Compute the seven raw dynamics scores per video");
  add_common(score, f);
  score->add_option("--videos", f.videos, "Directories of <id>.devf files or <id>/ frame directories");
  score->add_option("--embeddings", f.embeddings, "Directory of <id>.devb feature files");
  score->add_option("--entropy", f.entropy, "Temporal entropy estimator")->check(CLI::IsMember({"builtin", "external"}));
  score->add_option("--encoder", f.encoder,
                    "Encoder command template for --entropy external, e.g.\n" +
                        std::string(devil::temporal::kDefaultEncoderTemplate));

  auto* fit = app.add_subcommand("fit", "Fit the per-granularity alignment models");
  add_common(fit, f);
  fit->add_option("--scores", f.scores, "Scores file from `score`");
  fit->add_option("--ratings", f.ratings, "Human ratings CSV");
  fit->add_option("--train-fraction", f.train_fraction, "Share of rated videos used for training");

  auto* evaluate = app.add_subcommand("evaluate", "Aligned scores and model-level metrics");
  add_common(evaluate, f);
  evaluate->add_option("--scores", f.scores, "Scores file from `score`");
  evaluate->add_option("--model", f.alignment, "Alignment model from `fit`");
  evaluate->add_option("--benchmark", f.benchmark, "Benchmark prompts JSONL");
  evaluate->add_option("--quality", f.quality, "Quality table CSV");
  evaluate->add_option("--naturalness", f.naturalness, "Naturalness grades from `naturalness`");
  evaluate->add_option("--name", f.model_name, "Name of the evaluated video model");

  auto* correlate = app.add_subcommand("correlate", "Correlate overall scores with quality columns");
  add_common(correlate, f);
  correlate->add_option("--report", f.reports, "Reports from `evaluate`, one per model");
  correlate->add_option("--quality", f.quality, "Quality table CSV");
  correlate->add_option("--naturalness", f.naturalness, "Naturalness grades from `naturalness`");

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus with known dynamics");
  add_common(synth, f);
  synth->add_option("--count", f.corpus.videos, "Number of videos")->check(CLI::PositiveNumber);
  synth->add_option("--frames", f.corpus.frames, "Frames per video")->check(CLI::Range(2, 100000));
  synth->add_option("--size", f.corpus.side, "Frame width and height")->check(CLI::Range(16, 4096));
  synth->add_flag("--no-features", f.no_features, "Skip the .devb feature files");

  auto* naturalness = app.add_subcommand("naturalness", "Grade naturalness with a multimodal model endpoint");
  add_common(naturalness, f);
  naturalness->add_option("--videos", f.videos, "Directories of <id>.devf files or <id>/ frame directories");
  naturalness->add_option("--endpoint", f.endpoint, "HTTP endpoint URL");
  naturalness->add_option("--credential-env", f.credential_env, "Environment variable holding the bearer token");
  naturalness->add_option("--instruction", f.instruction, "Grading instruction sent with the frames");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : app.get_subcommands()) {
      const auto cfg = resolve(*cmd, f);
      const std::string name = cmd->get_name();
      if (name == "score") return devil::pipeline::cmd_score(cfg, std::cout);
      if (name == "fit") return devil::pipeline::cmd_fit(cfg, std::cout);
      if (name == "evaluate") return devil::pipeline::cmd_evaluate(cfg, std::cout);
      if (name == "correlate") return devil::pipeline::cmd_correlate(cfg, std::cout);
      if (name == "naturalness") return devil::pipeline::cmd_naturalness(cfg, std::cout);
      if (name == "synth") {
        auto options = f.corpus;
        options.features = !f.no_features;
        return devil::pipeline::cmd_synth(cfg, options, std::cout);
      }
    }
  } catch (const devil::Error& e) {
    std::cerr << "devil: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "devil: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
