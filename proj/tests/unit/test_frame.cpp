#include <gtest/gtest.h>

#include "../oracles/image_corpus.hpp"
#include "../oracles/cv_reference.hpp"
#include "devil/core/random.hpp"
#include "devil/frame/flow.hpp"
#include "devil/frame/phash.hpp"
#include "devil/frame/scores.hpp"
#include "devil/frame/ssim.hpp"
#include "devil/synth/generate.hpp"
#include "helpers.hpp"

using namespace devil;
using testing_util::luma;

namespace {

LumaFrame noise_frame(std::size_t w, std::size_t h, std::uint64_t seed) {
  Rng rng(seed);
  return luma(w, h, [&](auto, auto) { return static_cast<int>(rng.below(256)); });
}

// b(x, y) = a(x - dx, y - dy), wrapping at the borders.
LumaFrame shifted(const LumaFrame& a, int dx, int dy) {
  const auto w = static_cast<int>(a.width);
  const auto h = static_cast<int>(a.height);
  return luma(a.width, a.height, [&](std::size_t x, std::size_t y) {
    const int sx = ((static_cast<int>(x) - dx) % w + w) % w;
    const int sy = ((static_cast<int>(y) - dy) % h + h) % h;
    return a.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
  });
}

void expect_uniform_flow(const frame::FlowField& f, float dx, float dy) {
  for (std::size_t y = 0; y < f.height; ++y) {
    for (std::size_t x = 0; x < f.width; ++x) {
      ASSERT_EQ(f.at(x, y), (frame::FlowVector{dx, dy})) << "at " << x << "," << y;
    }
  }
}

}  // namespace

TEST(Flow, IdenticalFramesGiveZeroField) {
  const auto a = noise_frame(64, 48, 1);
  const auto f = frame::estimate_flow(a, a);
  expect_uniform_flow(f, 0.0F, 0.0F);
  EXPECT_EQ(f.mean_magnitude(), 0.0);
}

TEST(Flow, CheckerboardShiftedRight) {
  synth::SynthSpec s;
  s.kind = synth::Kind::Translate;
  s.speed = 2;
  s.frames = 2;
  const auto luma_frames = synth::generate(s).luma();
  expect_uniform_flow(frame::estimate_flow(luma_frames[0], luma_frames[1]), 2.0F, 0.0F);
}

TEST(Flow, DiagonalShiftOfTexture) {
  const auto a = noise_frame(64, 64, 2);
  expect_uniform_flow(frame::estimate_flow(a, shifted(a, -3, 1)), -3.0F, 1.0F);
}

TEST(Flow, NonMultipleSizes) {
  const auto a = noise_frame(45, 37, 3);
  expect_uniform_flow(frame::estimate_flow(a, shifted(a, 5, -2)), 5.0F, -2.0F);
}

TEST(Flow, DimensionMismatch) {
  EXPECT_DEVIL_ERROR((void)frame::estimate_flow(LumaFrame(32, 32), LumaFrame(32, 16)), ErrorKind::Inconsistency);
}

TEST(Flow, TieBreakPrefersSmallestDisplacement) {
  // A flat frame matches every displacement equally.
  expect_uniform_flow(frame::estimate_flow(LumaFrame(32, 32, 9), LumaFrame(32, 32, 9)), 0.0F, 0.0F);
}

TEST(FlowStrength, StaticAndPrecomputed) {
  std::vector<LumaFrame> frames(32, noise_frame(32, 32, 4));
  EXPECT_EQ(frame::optical_flow_strength(frames), 0.0);

  Tensor flow({3, 16, 16, 2});
  for (std::size_t i = 0; i < flow.data.size(); i += 2) {
    flow.data[i] = 3.0F;
    flow.data[i + 1] = 4.0F;
  }
  EXPECT_EQ(frame::optical_flow_strength(flow, 4, 16, 16), 5.0);
  EXPECT_DEVIL_ERROR((void)frame::optical_flow_strength(flow, 5, 16, 16), ErrorKind::Inconsistency);
}

TEST(Ssim, Identity) {
  for (const auto& img : oracle::image_corpus()) EXPECT_EQ(frame::ssim(img, img), 1.0);
}

TEST(Ssim, ConstantBlackVersusWhite) {
  const double c1 = (0.01 * 255) * (0.01 * 255);
  EXPECT_NEAR(frame::ssim(LumaFrame(32, 32, 0), LumaFrame(32, 32, 255)), c1 / (255.0 * 255.0 + c1), 1e-15);
}

TEST(Ssim, CheckerboardVersusInverse) {
  const auto a = luma(48, 48, [](std::size_t x, std::size_t y) { return ((x / 4 + y / 4) % 2) ? 255 : 0; });
  const auto b = luma(48, 48, [&](std::size_t x, std::size_t y) { return 255 - a.at(x, y); });
  const double v = frame::ssim(a, b);
  EXPECT_LE(v, 0.0);
  EXPECT_NEAR(v, oracle::ssim(a, b), 1e-6);
}

TEST(Ssim, MatchesReferenceOnPairs) {
  const auto imgs = oracle::image_corpus();
  for (std::size_t i = 0; i + 5 < imgs.size(); ++i) {
    const auto& a = imgs[i];
    const auto& b = imgs[i + 5];  // same size, different content
    ASSERT_EQ(a.width, b.width);
    EXPECT_NEAR(frame::ssim(a, b), oracle::ssim(a, b), 1e-6) << "pair " << i;
  }
}

TEST(StructuralDynamics, Cases) {
  const auto a = noise_frame(32, 32, 5);
  const auto b = noise_frame(32, 32, 6);
  const std::vector<LumaFrame> still(4, a);
  EXPECT_EQ(frame::structural_dynamics(still), 0.0);
  const std::vector<LumaFrame> pair = {a, b};
  EXPECT_EQ(frame::structural_dynamics(pair), 1.0 - frame::ssim(a, b));
  const auto inv = luma(32, 32, [&](std::size_t x, std::size_t y) { return 255 - a.at(x, y); });
  const std::vector<LumaFrame> flicker = {a, inv, a, inv};
  EXPECT_GT(frame::structural_dynamics(flicker), 1.0);
  EXPECT_NEAR(frame::structural_dynamics(flicker), 1.0 - oracle::ssim(a, inv), 1e-6);
}

TEST(Phash, ConstantFrameIsAllZero) {
  EXPECT_EQ(frame::phash(LumaFrame(40, 30, 77)).bits, 0U);
  for (double c : frame::phash_coefficients(LumaFrame(40, 30, 200))) EXPECT_EQ(c, 0.0);
}

TEST(Phash, MatchesReferenceBitForBit) {
  for (const auto& img : oracle::image_corpus()) {
    // Separable images put many AC coefficients exactly on the median; those
    // bits are decided by rounding noise, so only decisive bits are compared.
    const auto h = frame::phash(img);
    const auto ref = oracle::phash_reference(img);
    EXPECT_GE(std::popcount(ref.decisive), 12);
    EXPECT_EQ(h.bits & ref.decisive, ref.bits & ref.decisive) << img.width << "x" << img.height;
    EXPECT_EQ(h.bits & 1U, 0U);
    EXPECT_EQ(frame::phash(img), h);
  }
}

TEST(Phash, HalfTheAcBitsAreSet) {
  for (const auto& img : oracle::image_corpus()) EXPECT_LE(std::popcount(frame::phash(img).bits), 32);
}

TEST(PerceptualDynamics, Cases) {
  const auto imgs = oracle::image_corpus();
  const std::vector<LumaFrame> still(3, imgs[0]);
  EXPECT_EQ(frame::perceptual_dynamics(still), 0.0);
  const std::vector<LumaFrame> pair = {imgs[0], imgs[5]};
  EXPECT_EQ(frame::perceptual_dynamics(pair),
            frame::hamming_distance(frame::phash(imgs[0]), frame::phash(imgs[5])) / 64.0);
  EXPECT_DEVIL_ERROR((void)frame::perceptual_dynamics(std::vector<LumaFrame>{imgs[0]}), ErrorKind::TooFewFrames);
}
