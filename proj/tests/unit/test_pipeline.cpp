#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "devil/core/binary_io.hpp"
#include "devil/core/frames_io.hpp"
#include "devil/pipeline/correlate.hpp"
#include "devil/pipeline/evaluate.hpp"
#include "devil/pipeline/fit.hpp"
#include "devil/pipeline/naturalness.hpp"
#include "devil/pipeline/score.hpp"
#include "devil/synth/corpus.hpp"
#include "devil/synth/generate.hpp"
#include "helpers.hpp"
#include "httplib.h"  // after Eigen: <resolv.h> defines _res

using namespace devil;
using namespace devil::pipeline;
using testing_util::ScratchDir;

namespace {

void write_static_videos(const std::filesystem::path& dir, std::size_t count) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < count; ++k) {
    synth::SynthSpec s;
    s.pattern = static_cast<synth::Pattern>(k % 3);
    s.seed = k;
    io::write_devf(synth::generate(s), dir / ("s" + std::to_string(k) + ".devf"));
  }
}

// Alignment whose aligned scores equal the first raw feature of each granularity.
alignment::AlignmentArtifact passthrough_alignment() {
  alignment::AlignmentArtifact a;
  for (auto g : alignment::kGranularities) {
    auto& m = a.model.get(g);
    m.granularity = g;
    const auto p = alignment::feature_names(g).size();
    m.weights.assign(p, 0.0);
    m.weights[0] = 1.0;
    m.input_min.assign(p, 0.0);
    m.input_max.assign(p, 1.0);
  }
  return a;
}

VideoEntry entry_with_overall(double s) {
  VideoEntry v;
  v.scores.s_ofs = v.scores.s_pa = v.scores.s_te = s;
  return v;
}

QualityRecord quality_of(const std::string& id, double composite) {
  return QualityRecord{id, composite, composite, composite, composite};
}

}  // namespace

TEST(Score, StaticVideosScoreZero) {
  ScratchDir d;
  write_static_videos(d.path() / "videos", 4);
  RunConfig cfg;
  cfg.videos = {d.path() / "videos"};
  const auto r = score_videos(cfg);
  ASSERT_EQ(r.per_video.size(), 4U);
  EXPECT_TRUE(r.failures.empty());
  for (const auto& [id, v] : r.per_video) {
    EXPECT_DOUBLE_EQ(v.scores.s_ofs, 0.0) << id;
    EXPECT_DOUBLE_EQ(v.scores.s_sd, 0.0) << id;
    EXPECT_DOUBLE_EQ(v.scores.s_pd, 0.0) << id;
    EXPECT_NEAR(v.scores.s_pa, 0.0, 1e-12) << id;
    EXPECT_NEAR(v.scores.s_ga, 0.0, 1e-12) << id;
    EXPECT_LT(v.scores.s_te, 0.01) << id;
    EXPECT_NEAR(v.scores.s_tsd, 0.0, 1e-12) << id;
    EXPECT_EQ(v.sources.at("flow_source"), "builtin");
    EXPECT_EQ(v.sources.at("patch_source"), "luma_fallback");
    EXPECT_EQ(v.sources.at("segment_source"), "luma_fallback");
    EXPECT_EQ(v.sources.at("frame_embedding_source"), "luma_fallback");
    EXPECT_EQ(v.sources.at("entropy_source"), "builtin");
  }
}

TEST(Score, UsesEmbeddingsWhenPresent) {
  ScratchDir d;
  synth::CorpusOptions o;
  o.videos = 3;
  synth::write_corpus(d.path(), o);
  RunConfig cfg;
  cfg.videos = {d.path() / "videos"};
  cfg.embeddings = d.path() / "features";
  const auto r = score_videos(cfg);
  ASSERT_EQ(r.per_video.size(), 3U);
  for (const auto& [id, v] : r.per_video) {
    EXPECT_EQ(v.sources.at("patch_source"), "devb") << id;
    EXPECT_EQ(v.sources.at("segment_source"), "devb");
    EXPECT_EQ(v.sources.at("frame_embedding_source"), "devb");
  }
}

TEST(Score, FrameCountMismatchIsInconsistency) {
  synth::SynthSpec s;
  const auto video = synth::generate(s);
  s.frames = 12;
  const auto bundle = synth::generate_features(s);
  EXPECT_DEVIL_ERROR((void)score_video(video, bundle, RunConfig{}), ErrorKind::Inconsistency);
}

TEST(Score, WorkerCountDoesNotChangeReport) {
  ScratchDir d;
  synth::CorpusOptions o;
  o.videos = 10;
  synth::write_corpus(d.path(), o);
  RunConfig cfg;
  cfg.videos = {d.path() / "videos"};
  cfg.embeddings = d.path() / "features";
  cfg.workers = 1;
  const auto one = format_report(score_videos(cfg));
  cfg.workers = 8;
  EXPECT_EQ(format_report(score_videos(cfg)), one);
}

TEST(Score, BadVideoIsRecordedNotFatal) {
  ScratchDir d;
  write_static_videos(d.path() / "videos", 2);
  io::write_file_text(d.path() / "videos" / "broken.devf", "not a devf file");
  RunConfig cfg;
  cfg.videos = {d.path() / "videos"};
  cfg.output = d.path() / "scores.json";
  std::ostringstream log;
  EXPECT_EQ(cmd_score(cfg, log), 0);
  const auto r = read_report(cfg.output);
  EXPECT_EQ(r.per_video.size(), 2U);
  ASSERT_EQ(r.failures.count("broken"), 1U);
  EXPECT_NE(log.str().find("broken"), std::string::npos);
}

TEST(Score, AllFailedExitsNonZero) {
  ScratchDir d;
  std::filesystem::create_directories(d.path() / "videos");
  io::write_file_text(d.path() / "videos" / "a.devf", "junk");
  RunConfig cfg;
  cfg.videos = {d.path() / "videos"};
  cfg.output = d.path() / "scores.json";
  std::ostringstream log;
  EXPECT_EQ(cmd_score(cfg, log), 1);
}

TEST(Score, ExternalModeNeedsEncoder) {
  RunConfig cfg;
  cfg.videos = {"."};
  cfg.entropy_mode = EntropyMode::External;
  EXPECT_DEVIL_ERROR((void)score_videos(cfg), ErrorKind::Validation);
}

TEST(Score, DuplicateIdsRejected) {
  ScratchDir d;
  write_static_videos(d.path() / "a", 1);
  write_static_videos(d.path() / "b", 1);
  EXPECT_DEVIL_ERROR((void)discover_videos({d.path() / "a", d.path() / "b"}), ErrorKind::Validation);
}

TEST(Config, FromJson) {
  const auto c = config_from_json(nlohmann::json::parse(
      R"({"videos": "v", "workers": 4, "entropy_mode": "external", "encoder_command": "x {input} {output}",
          "credential_env": "MY_TOKEN", "seed": 7})"));
  EXPECT_EQ(c.videos.size(), 1U);
  EXPECT_EQ(c.workers, 4U);
  EXPECT_EQ(c.entropy_mode, EntropyMode::External);
  EXPECT_EQ(c.credential_env, "MY_TOKEN");
  EXPECT_EQ(c.seed, 7U);
  EXPECT_DEVIL_ERROR((void)config_from_json(nlohmann::json::parse(R"({"entropy_mode": "zip"})")),
                     ErrorKind::Validation);
  EXPECT_DEVIL_ERROR((void)config_from_json(nlohmann::json::parse(R"({"workers": "many"})")), ErrorKind::Format);
  EXPECT_EQ(RunConfig{}.credential_env, "DEVIL_MLLM_TOKEN");
}

TEST(Fit, TooFewRowsIsUnderdetermined) {
  EvaluationReport r;
  std::map<std::string, RatingsRecord> ratings;
  for (int i = 0; i < 4; ++i) {
    const auto id = "v" + std::to_string(i);
    r.per_video[id] = entry_with_overall(0.1 * i);
    ratings[id] = RatingsRecord{id, i + 1, i + 1, i + 1, 1};
  }
  // Three training rows cannot fix the four frame-level parameters.
  EXPECT_DEVIL_ERROR((void)fit_alignment(r, ratings, 0.75, 0), ErrorKind::Underdetermined);
}

TEST(Evaluate, ControllabilityQualityAndUnmatched) {
  EvaluateInputs in;
  in.alignment = passthrough_alignment();
  in.scores.per_video["a"] = entry_with_overall(0.05);
  in.scores.per_video["b"] = entry_with_overall(0.5);
  in.scores.per_video["c"] = entry_with_overall(0.95);
  in.scores.per_video["zz"] = entry_with_overall(0.7);
  in.benchmark = {{"a", "p", 1}, {"b", "p", 3}, {"c", "p", 5}};
  in.quality = std::map<std::string, QualityRecord>{
      {"a", quality_of("a", 0.8)}, {"b", quality_of("b", 0.6)}, {"c", quality_of("c", 0.4)}};
  const auto r = evaluate(in);
  EXPECT_EQ(r.unmatched, std::vector<std::string>{"zz"});
  const auto& m = r.model_metrics;
  EXPECT_EQ(m.videos, 3U);
  EXPECT_DOUBLE_EQ(*m.d_control, 1.0);
  EXPECT_NEAR(*m.d_quality, 0.15, 1e-12);
  EXPECT_NEAR(*m.d_range, 0.882, 1e-12);
  EXPECT_NEAR(r.per_video.at("b").scores.overall.value(), 0.5, 1e-12);
  EXPECT_EQ(r.per_video.at("c").grade, 5);
  EXPECT_NO_THROW(validate_report(to_json(r)));
}

TEST(Evaluate, WithoutQualityTheQualityMetricsAreNull) {
  EvaluateInputs in;
  in.alignment = passthrough_alignment();
  in.scores.per_video["a"] = entry_with_overall(0.2);
  in.scores.per_video["b"] = entry_with_overall(0.3);
  in.benchmark = {{"a", "p", 2}, {"b", "p", 2}};
  const auto r = evaluate(in);
  EXPECT_FALSE(r.model_metrics.d_quality.has_value());
  EXPECT_FALSE(r.model_metrics.d_quality_high.has_value());
  // A single grade leaves controllability undefined rather than failing.
  EXPECT_FALSE(r.model_metrics.d_control.has_value());
  const auto j = to_json(r);
  EXPECT_TRUE(j["model_metrics"]["d_quality"].is_null());
}

TEST(Evaluate, MissingQualityRowIsAnError) {
  EvaluateInputs in;
  in.alignment = passthrough_alignment();
  in.scores.per_video["a"] = entry_with_overall(0.2);
  in.benchmark = {{"a", "p", 2}};
  in.quality = std::map<std::string, QualityRecord>{};
  EXPECT_DEVIL_ERROR((void)evaluate(in), ErrorKind::MissingInput);
}

TEST(Evaluate, NaturalnessReplacesQualityColumn) {
  EvaluateInputs in;
  in.alignment = passthrough_alignment();
  in.scores.per_video["a"] = entry_with_overall(0.2);
  in.scores.per_video["b"] = entry_with_overall(0.8);
  in.benchmark = {{"a", "p", 1}, {"b", "p", 4}};
  auto qa = quality_of("a", 0.5);
  qa.naturalness.reset();
  in.quality = std::map<std::string, QualityRecord>{{"a", qa}, {"b", quality_of("b", 0.5)}};
  in.naturalness = std::map<std::string, metrics::NaturalnessLevel>{
      {"a", metrics::NaturalnessLevel::AlmostReal}, {"b", metrics::NaturalnessLevel::CompletelyFictitious}};
  const auto r = evaluate(in);
  EXPECT_NEAR(*r.per_video.at("a").quality, (1.0 + 0.5 * 3) / 4.0, 1e-12);
  EXPECT_NEAR(*r.model_metrics.naturalness, 0.5, 1e-12);
  EXPECT_EQ(r.per_video.at("b").naturalness, "Completely Fictitious");
}

TEST(Correlate, InverseAndConstantColumns) {
  EvaluationReport report;
  std::map<std::string, QualityRecord> quality;
  for (int i = 0; i < 6; ++i) {
    const auto id = "v" + std::to_string(i);
    const double s = 0.1 + 0.15 * i;
    auto e = entry_with_overall(s);
    e.scores.overall = s;
    report.per_video[id] = e;
    quality[id] = QualityRecord{id, 0.3 + 0.1 * i, 1.0 - s, 0.5, std::nullopt};
  }
  const auto j = correlate_models({{"m1", report}}, quality);
  const auto& cells = j["models"]["m1"];
  EXPECT_NEAR(cells["motion_smoothness"]["pearson"].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(cells["motion_smoothness"]["kendall"].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(cells["naturalness"]["pearson"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(cells["subject_consistency"]["pearson"].is_null());
  EXPECT_TRUE(cells["subject_consistency"]["kendall"].is_null());
  EXPECT_EQ(cells["background_consistency"]["n"], 0);
  EXPECT_TRUE(cells["composite"]["pearson"].is_null());
  EXPECT_NEAR(j["average"]["motion_smoothness"]["pearson"].get<double>(), -1.0, 1e-12);
  EXPECT_TRUE(j["average"]["subject_consistency"]["pearson"].is_null());
}

TEST(Naturalness, FrameSampling) {
  EXPECT_EQ(sample_frame_indices(16, 8), (std::vector<std::size_t>{0, 2, 4, 6, 9, 11, 13, 15}));
  EXPECT_EQ(sample_frame_indices(3, 8), (std::vector<std::size_t>{0, 0, 1, 1, 1, 1, 2, 2}));
  EXPECT_EQ(sample_frame_indices(5, 1), std::vector<std::size_t>{0});
}

TEST(Naturalness, MockIsDeterministic) {
  ScratchDir d;
  write_static_videos(d.path() / "videos", 5);
  RunConfig cfg;
  cfg.videos = {d.path() / "videos"};
  cfg.mock = true;
  const auto a = grade_naturalness(cfg);
  const auto b = grade_naturalness(cfg);
  EXPECT_EQ(a.levels, b.levels);
  EXPECT_EQ(a.levels.size(), 5U);
  EXPECT_EQ(a.levels.at("s0"), mock_naturalness("s0"));
  EXPECT_EQ(to_json(a, cfg).dump(), to_json(b, cfg).dump());
  cfg.mock = false;
  EXPECT_DEVIL_ERROR((void)grade_naturalness(cfg), ErrorKind::MissingInput);
}

TEST(Naturalness, EndpointParsing) {
  const auto e = split_endpoint("http://127.0.0.1:8080/v1/grade");
  EXPECT_EQ(e.base, "http://127.0.0.1:8080");
  EXPECT_EQ(e.path, "/v1/grade");
  EXPECT_EQ(split_endpoint("https://host").path, "/");
  EXPECT_DEVIL_ERROR((void)split_endpoint("host:80"), ErrorKind::Validation);
}

namespace {

class FakeGrader {
 public:
  explicit FakeGrader(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/grade", [this, handler](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeGrader() {
    server_.stop();
    thread_.join();
  }
  [[nodiscard]] std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/grade"; }
  std::atomic<int> calls{0};

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

RunConfig endpoint_config(const std::filesystem::path& videos, const std::string& url) {
  RunConfig cfg;
  cfg.videos = {videos};
  cfg.endpoint = url;
  cfg.retry_backoff_ms = 1;
  cfg.credential_env = "DEVIL_TEST_GRADER_TOKEN";
  return cfg;
}

}  // namespace

TEST(Naturalness, GradesThroughEndpoint) {
  ScratchDir d;
  write_static_videos(d.path() / "videos", 1);
  std::string auth;
  std::size_t frames = 0;
  std::string instruction;
  FakeGrader grader([&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    const auto body = nlohmann::json::parse(req.body);
    frames = body["frames"].size();
    instruction = body["instruction"].get<std::string>();
    res.set_content("Looking at the motion, I rate this Slightly Unrealistic because the water drifts.", "text/plain");
  });
  ::setenv("DEVIL_TEST_GRADER_TOKEN", "sekret", 1);
  const auto r = grade_naturalness(endpoint_config(d.path() / "videos", grader.url()));
  ::unsetenv("DEVIL_TEST_GRADER_TOKEN");
  ASSERT_TRUE(r.failures.empty()) << r.failures.begin()->second;
  EXPECT_EQ(r.levels.at("s0"), metrics::NaturalnessLevel::SlightlyUnrealistic);
  EXPECT_DOUBLE_EQ(*r.aggregate, 0.75);
  EXPECT_EQ(auth, "Bearer sekret");
  EXPECT_EQ(frames, kNaturalnessFrames);
  EXPECT_EQ(instruction, std::string(kDefaultInstruction));
}

TEST(Naturalness, RetriesThenSucceeds) {
  ScratchDir d;
  write_static_videos(d.path() / "videos", 1);
  std::atomic<int> seen{0};
  FakeGrader grader([&](const httplib::Request& req, httplib::Response& res) {
    EXPECT_FALSE(req.has_header("Authorization"));
    if (++seen <= 2) {
      res.status = 503;
      return;
    }
    res.set_content("almost real", "text/plain");
  });
  const auto r = grade_naturalness(endpoint_config(d.path() / "videos", grader.url()));
  EXPECT_EQ(grader.calls, 3);
  EXPECT_EQ(r.levels.at("s0"), metrics::NaturalnessLevel::AlmostReal);
}

TEST(Naturalness, PersistentFailureAndUnparseableReplyAreRecorded) {
  ScratchDir d;
  write_static_videos(d.path() / "videos", 1);
  {
    FakeGrader grader([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    const auto r = grade_naturalness(endpoint_config(d.path() / "videos", grader.url()));
    EXPECT_EQ(grader.calls, kNaturalnessAttempts);
    ASSERT_EQ(r.failures.count("s0"), 1U);
    EXPECT_NE(r.failures.at("s0").find("HTTP 500"), std::string::npos);
    EXPECT_FALSE(r.aggregate.has_value());
  }
  {
    FakeGrader grader([](const httplib::Request&, httplib::Response& res) {
      res.set_content("I cannot judge this clip.", "text/plain");
    });
    const auto r = grade_naturalness(endpoint_config(d.path() / "videos", grader.url()));
    EXPECT_EQ(grader.calls, 1);
    ASSERT_EQ(r.failures.count("s0"), 1U);
    EXPECT_NE(r.failures.at("s0").find("no naturalness level"), std::string::npos);
  }
}

TEST(Naturalness, FileRoundTrip) {
  ScratchDir d;
  write_static_videos(d.path() / "videos", 3);
  RunConfig cfg;
  cfg.videos = {d.path() / "videos"};
  cfg.mock = true;
  cfg.output = d.path() / "nat.json";
  std::ostringstream log;
  EXPECT_EQ(cmd_naturalness(cfg, log), 0);
  EXPECT_EQ(read_naturalness(cfg.output), grade_naturalness(cfg).levels);
}
