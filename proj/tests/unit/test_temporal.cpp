#include <gtest/gtest.h>

#include <cmath>

#include "../oracles/oracles.hpp"
#include "devil/core/random.hpp"
#include "devil/synth/generate.hpp"
#include "devil/temporal/aperiodicity.hpp"
#include "devil/temporal/diversity.hpp"
#include "devil/temporal/entropy.hpp"
#include "devil/temporal/luma_features.hpp"
#include "devil/temporal/similarity.hpp"
#include "helpers.hpp"

using namespace devil;
using temporal::FeatureRows;

namespace {

using Series = std::vector<std::vector<double>>;

FeatureRows rows_from(const Series& s) {
  FeatureRows out(s.size(), s.front().size());
  for (std::size_t i = 0; i < s.size(); ++i) std::copy(s[i].begin(), s[i].end(), out.row(i).begin());
  return out;
}

Series random_series(Rng& rng, std::size_t n, std::size_t dim) {
  Series s(n, std::vector<double>(dim));
  for (auto& v : s) {
    for (auto& x : v) x = rng.normal();
  }
  return s;
}

double acf_of(const Series& s) { return temporal::acf(rows_from(s).view()); }

FrameSequence synth_video(synth::Kind kind, std::size_t frames = 16) {
  synth::SynthSpec s;
  s.kind = kind;
  s.frames = frames;
  s.speed = 2;
  s.loop_length = 4;
  s.repeats = frames / 4;
  s.seed = 3;
  s.cut_point = frames / 2;
  return synth::generate(s);
}

}  // namespace

TEST(Acf, ConstantSeriesIsExactlyOne) {
  for (std::size_t n : {9, 10, 16, 31, 64}) {
    const Series s(n, std::vector<double>{0.3, -1.7, 2.2});
    EXPECT_EQ(acf_of(s), 1.0) << n;
  }
}

TEST(Acf, AlternatingOrthogonalMatchesBruteForce) {
  Series s;
  for (std::size_t i = 0; i < 16; ++i) s.push_back(i % 2 == 0 ? std::vector<double>{1, 0} : std::vector<double>{0, 1});
  EXPECT_NEAR(acf_of(s), oracle::acf(s, 2), 1e-12);
}

TEST(Acf, DistinctBasisVectorsGiveZero) {
  const std::size_t n = 12;
  Series s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) s[i][i] = 1.0;
  EXPECT_EQ(acf_of(s), 0.0);
}

TEST(Acf, RandomSeriesMatchBruteForce) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 9 + rng.below(40);
    const auto s = random_series(rng, n, 1 + rng.below(6));
    EXPECT_NEAR(acf_of(s), oracle::acf(s, n / 8), 1e-12);
  }
}

TEST(Acf, ScaleInvariant) {
  Rng rng(2);
  auto s = random_series(rng, 20, 4);
  const double before = acf_of(s);
  for (auto& v : s) {
    for (auto& x : v) x *= 7.5;
  }
  EXPECT_NEAR(acf_of(s), before, 1e-14);
}

TEST(Acf, Errors) {
  Series s(12, std::vector<double>{1.0, 1.0});
  s[3] = {0.0, 0.0};
  EXPECT_DEVIL_ERROR((void)acf_of(s), ErrorKind::UndefinedSimilarity);
  const Series short_series(7, std::vector<double>{1.0});
  EXPECT_DEVIL_ERROR((void)acf_of(short_series), ErrorKind::Validation);
}

TEST(PatchAperiodicity, ConstantMapsGiveZero) {
  Tensor t({16, 3, 2, 4});
  for (std::size_t i = 0; i < t.data.size(); ++i) t.data[i] = static_cast<float>(1 + i % 24);
  EXPECT_EQ(temporal::patch_aperiodicity(t), 0.0);
}

TEST(PatchAperiodicity, SingleCellReduces) {
  Rng rng(8);
  const auto s = random_series(rng, 20, 5);
  Tensor t({20, 1, 1, 5});
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < 5; ++j) t.data[i * 5 + j] = static_cast<float>(s[i][j]);
  }
  Series as_float = s;
  for (auto& v : as_float) {
    for (auto& x : v) x = static_cast<float>(x);
  }
  EXPECT_NEAR(temporal::patch_aperiodicity(t), 1.0 - acf_of(as_float), 1e-15);
}

TEST(PatchAperiodicity, Errors) {
  EXPECT_DEVIL_ERROR((void)temporal::patch_aperiodicity(Tensor({8, 2, 2, 3})), ErrorKind::TooFewFrames);
  EXPECT_DEVIL_ERROR((void)temporal::patch_aperiodicity(EmbeddingBundle{}), ErrorKind::MissingInput);
}

TEST(GlobalAperiodicity, Cases) {
  const Series same(4, std::vector<double>{0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(temporal::global_aperiodicity(rows_from(same).view()), 0.0);

  Series ortho(4, std::vector<double>(4, 0.0));
  for (std::size_t i = 0; i < 4; ++i) ortho[i][i] = 1.0;
  EXPECT_EQ(temporal::global_aperiodicity(rows_from(ortho).view()), 1.0);

  // Pairwise cosines 0.5, 0 and -0.5 average to zero.
  const double r3 = std::sqrt(3.0);
  const Series mixed = {{1, 0, 0}, {0.5, r3 / 2, 0}, {0, -1 / r3, std::sqrt(2.0 / 3.0)}};
  EXPECT_NEAR(temporal::global_aperiodicity(rows_from(mixed).view()), 1.0, 1e-12);

  const Series with_zero = {{1, 0}, {0, 0}};
  EXPECT_DEVIL_ERROR((void)temporal::global_aperiodicity(rows_from(with_zero).view()),
                     ErrorKind::UndefinedSimilarity);
}

TEST(TemporalEntropy, StaticFloor) {
  const auto luma = synth_video(synth::Kind::Static).luma();
  EXPECT_LT(temporal::temporal_entropy_builtin(luma), 0.01);
}

TEST(TemporalEntropy, NoiseExceedsStructuredContent) {
  const double noise = temporal::temporal_entropy_builtin(synth_video(synth::Kind::Noise).luma());
  EXPECT_GE(noise, 4.0);
  double previous = 0.0;
  for (auto kind : {synth::Kind::Static, synth::Kind::Periodic, synth::Kind::Translate, synth::Kind::SceneCut}) {
    const double te = temporal::temporal_entropy_builtin(synth_video(kind).luma());
    EXPECT_LT(te, noise) << synth::to_string(kind);
    if (kind == synth::Kind::Periodic) {
      EXPECT_GT(te, previous);
    }
    previous = te;
  }
}

TEST(TemporalEntropy, Deterministic) {
  const auto luma = synth_video(synth::Kind::Translate).luma();
  EXPECT_EQ(temporal::temporal_entropy_builtin(luma), temporal::temporal_entropy_builtin(luma));
}

TEST(TemporalEntropy, ExternalCopyEncoderCountsRawBits) {
  const auto video = synth_video(synth::Kind::Translate, 8);
  const temporal::EncoderCommand cmd{std::string(DEVIL_FIXTURES_DIR) + "/copy_encoder.sh {input} {output}"};
  EXPECT_EQ(temporal::temporal_entropy_external(video, cmd), 24.0);
}

TEST(TemporalEntropy, ExternalErrors) {
  const auto video = synth_video(synth::Kind::Static, 4);
  EXPECT_DEVIL_ERROR((void)temporal::temporal_entropy_external(
                         video, {"devil-no-such-encoder-binary {input} {output}"}),
                     ErrorKind::Tool);
  try {
    (void)temporal::temporal_entropy_external(
        video, {std::string(DEVIL_FIXTURES_DIR) + "/failing_encoder.sh {input} {output}"});
    ADD_FAILURE() << "expected a tool error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Tool);
    EXPECT_NE(std::string(e.what()).find("unsupported pixel format"), std::string::npos);
  }
}

TEST(EncoderCommand, Expansion) {
  const temporal::EncoderCommand cmd{"enc -s {width}x{height} -n {frames} -i {input} {output}"};
  EXPECT_EQ(cmd.expand("in dir/a.rgb", "b.bin", 64, 48, 9),
            (std::vector<std::string>{"enc", "-s", "64x48", "-n", "9", "-i", "in dir/a.rgb", "b.bin"}));
}

TEST(Diversity, Cases) {
  const Series same(5, std::vector<double>{1, 2, 3});
  EXPECT_EQ(temporal::temporal_semantic_diversity(rows_from(same).view()), 0.0);

  Series alt;
  for (int i = 0; i < 10; ++i) alt.push_back(i % 2 == 0 ? std::vector<double>{1, 0} : std::vector<double>{0, 1});
  EXPECT_EQ(temporal::temporal_semantic_diversity(rows_from(alt).view()), 0.5);

  EXPECT_DEVIL_ERROR((void)temporal::temporal_semantic_diversity(EmbeddingBundle{}), ErrorKind::MissingInput);
}

TEST(Diversity, MatchesTwoPassVariance) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_series(rng, 1 + rng.below(30), 1 + rng.below(8));
    std::vector<double> mean(s[0].size(), 0.0);
    for (const auto& v : s) {
      for (std::size_t j = 0; j < v.size(); ++j) mean[j] += v[j] / static_cast<double>(s.size());
    }
    double expected = 0.0;
    for (const auto& v : s) {
      for (std::size_t j = 0; j < v.size(); ++j) expected += (v[j] - mean[j]) * (v[j] - mean[j]);
    }
    expected /= static_cast<double>(s.size());
    EXPECT_NEAR(temporal::temporal_semantic_diversity(rows_from(s).view()), expected, 1e-10);
  }
}

TEST(Diversity, OrthogonalInvariance) {
  Rng rng(9);
  const std::size_t dim = 6;
  const auto s = random_series(rng, 12, dim);
  // Householder reflection I - 2uu^T / |u|^2.
  const auto u = random_series(rng, 1, dim)[0];
  double uu = 0.0;
  for (double x : u) uu += x * x;
  Series r = s;
  for (auto& v : r) {
    double uv = 0.0;
    for (std::size_t j = 0; j < dim; ++j) uv += u[j] * v[j];
    for (std::size_t j = 0; j < dim; ++j) v[j] -= 2.0 * uv / uu * u[j];
  }
  EXPECT_NEAR(temporal::temporal_semantic_diversity(rows_from(r).view()),
              temporal::temporal_semantic_diversity(rows_from(s).view()), 1e-9);
}

TEST(LumaFeatures, ShapesAndRange) {
  const auto luma = synth_video(synth::Kind::Translate, 18).luma();
  const auto grid = temporal::luma_patch_grid(luma);
  EXPECT_EQ(grid.dims, (std::vector<std::uint32_t>{18, 8, 8, 16}));
  for (float v : grid.data) {
    EXPECT_GT(v, 0.0F);
    EXPECT_LE(v, 1.0F);
  }
  const auto fe = temporal::luma_frame_embeddings(luma);
  EXPECT_EQ(fe.rows, 18U);
  EXPECT_EQ(fe.dim, 256U);
  const auto se = temporal::luma_segment_embeddings(luma);
  EXPECT_EQ(se.rows, 4U);
  EXPECT_EQ(se.dim, 4U * 64U);  // floor(18 / 4) frames per segment
}

TEST(LumaFeatures, StaticVideoGivesZeroScores) {
  const auto luma = synth_video(synth::Kind::Static, 32).luma();
  EXPECT_EQ(temporal::patch_aperiodicity(temporal::luma_patch_grid(luma)), 0.0);
  EXPECT_EQ(temporal::global_aperiodicity(temporal::luma_segment_embeddings(luma).view()), 0.0);
  EXPECT_EQ(temporal::temporal_semantic_diversity(temporal::luma_frame_embeddings(luma).view()), 0.0);
}
