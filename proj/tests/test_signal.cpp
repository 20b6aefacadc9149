#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "tfvtg/error.hpp"
#include "tfvtg/signal.hpp"

namespace tfvtg {
namespace {

TEST(CosineSimilarity, IdenticalAndOrthogonalFrames) {
  EmbeddingSet e("v", {1, 0, 0, 1}, 2, {1, 0}, 3.0);
  const auto track = cosine_similarity(e);
  ASSERT_EQ(track.size(), 2u);
  EXPECT_DOUBLE_EQ(track.values()[0], 1.0);
  EXPECT_DOUBLE_EQ(track.values()[1], 0.0);
  EXPECT_EQ(track.video_id(), "v");
  EXPECT_EQ(track.fps(), 3.0);
}

TEST(CosineSimilarity, HandComputedAndScaleInvariant) {
  EmbeddingSet diag("v", {1, 0, 1, 0}, 2, {1, 1}, 3.0);
  EXPECT_NEAR(cosine_similarity(diag).values()[0], 1.0 / std::sqrt(2.0), 1e-12);

  EmbeddingSet scaled("v", {4, 0, 4, 0}, 2, {2, 0}, 3.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(scaled).values()[0], 1.0);
}

TEST(CosineSimilarity, RejectsZeroNormRowsAndNonFiniteEntries) {
  EmbeddingSet zero_row("v", {1, 0, 0, 0, 1, 1}, 2, {1, 0}, 3.0);
  try {
    cosine_similarity(zero_row);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("frame embedding 1"), std::string::npos) << e.what();
  }
  EmbeddingSet zero_text("v", {1, 0, 0, 1}, 2, {0, 0}, 3.0);
  EXPECT_THROW(cosine_similarity(zero_text), InputError);
  EXPECT_THROW(EmbeddingSet("v", {1, NAN}, 2, {1, 0}, 3.0), InputError);
  EXPECT_THROW(EmbeddingSet("v", {1, 0}, 2, {1, 0, 0}, 3.0), InputError);
}

TEST(SimilarityTrack, ClampsSlackAndRejectsOutliers) {
  SimilarityTrack t("v", {1.0005, -1.0002, 0.5}, 3.0);
  EXPECT_EQ(t.values()[0], 1.0);
  EXPECT_EQ(t.values()[1], -1.0);
  EXPECT_THROW(SimilarityTrack("v", {1.01, 0.0}, 3.0), InputError);
  EXPECT_THROW(SimilarityTrack("v", {0.0}, 3.0), InputError);
  EXPECT_THROW(SimilarityTrack("v", {0.0, INFINITY}, 3.0), InputError);
  EXPECT_THROW(SimilarityTrack("v", {0.0, 0.1}, 0.0), InputError);
}

TEST(GaussianSmooth, PreservesConstants) {
  const std::vector<double> c(11, 0.37);
  for (double sigma : {0.5, 1.0, 2.0, 5.0})
    for (double v : gaussian_smooth(c, sigma)) EXPECT_NEAR(v, 0.37, 1e-15);
}

TEST(GaussianSmooth, ZeroSigmaIsIdentity) {
  std::mt19937_64 rng(3);
  const auto x = testing::random_values(rng, 17);
  EXPECT_EQ(gaussian_smooth(x, 0.0), x);
}

TEST(GaussianSmooth, ImpulseIsSymmetricAndNormalized) {
  const auto y = gaussian_smooth(std::vector<double>{0, 0, 1, 0, 0}, 1.0);
  EXPECT_NEAR(y[0], y[4], 1e-15);
  EXPECT_NEAR(y[1], y[3], 1e-15);
  EXPECT_EQ(std::max_element(y.begin(), y.end()) - y.begin(), 2);
  // Each border sample renormalizes over its in-range taps.
  EXPECT_NEAR(y[2], 0.4026199468942474, 1e-12);
  EXPECT_NEAR(y[0], 0.07720320478522086, 1e-12);
}

TEST(GaussianSmooth, MatchesIndependentFilter) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = testing::random_values(rng, 5 + rep);
    const double sigma = 0.25 * rep;
    const auto a = gaussian_smooth(x, sigma);
    const auto b = testing::oracle_smooth(x, sigma);
    for (std::size_t n = 0; n < x.size(); ++n) EXPECT_NEAR(a[n], b[n], 1e-12);
  }
}

TEST(Differences, Examples) {
  const auto d = differences(std::vector<double>{0.1, 0.3, 0.2});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[0], 0.2, 1e-15);
  EXPECT_NEAR(d[1], -0.1, 1e-15);
  for (double v : differences(std::vector<double>(6, 0.4))) EXPECT_EQ(v, 0.0);
  for (double v : differences(std::vector<double>{-0.5, -0.1, 0.0, 0.3, 0.31})) EXPECT_GT(v, 0.0);
  EXPECT_THROW(differences(std::vector<double>{1.0}), InputError);
}

TEST(DynamicScore, TelescopesWhenAllAboveThreshold) {
  const std::vector<double> s{0.0, 0.1, 0.2, 0.3};
  EXPECT_NEAR(dynamic_score(differences(s), 0, 3, 0.05), 0.3, 1e-15);
}

TEST(DynamicScore, ThresholdViolationForcesZero) {
  const std::vector<double> s{0.0, 0.1, 0.05, 0.3};
  EXPECT_EQ(dynamic_score(differences(s), 0, 3, 0.05), 0.0);
}

TEST(DynamicScore, EmptySegmentAndRangeChecks) {
  const auto d = differences(std::vector<double>{0.0, 0.5, 1.0});
  EXPECT_EQ(dynamic_score(d, 1, 1, 0.0), 0.0);
  EXPECT_THROW(dynamic_score(d, 2, 1, 0.0), InputError);
  EXPECT_THROW(dynamic_score(d, 0, 3, 0.0), InputError);
  EXPECT_THROW(dynamic_score(d, -1, 1, 0.0), InputError);
}

TEST(StaticScore, Examples) {
  EXPECT_DOUBLE_EQ(static_score(std::vector<double>{1, 1, 0, 0}, 0, 2), 1.0);
  EXPECT_DOUBLE_EQ(static_score(std::vector<double>{0, 1, 1, 0}, 1, 3), 1.0);
  const std::vector<double> c(7, 0.25);
  for (std::ptrdiff_t k = 0; k < 7; ++k)
    for (std::ptrdiff_t j = k + 1; j <= 7; ++j) {
      if (j - k < 7) {
        EXPECT_NEAR(static_score(c, k, j), 0.0, 1e-15);
      }
    }
}

TEST(StaticScore, RejectsFullVideoAndEmptyIntervals) {
  const std::vector<double> s{0.1, 0.2, 0.3};
  EXPECT_THROW(static_score(s, 0, 3), InputError);
  EXPECT_THROW(static_score(s, 1, 1), InputError);
  EXPECT_THROW(static_score(s, 2, 4), InputError);
}

TEST(StaticScore, HalvesAreAntisymmetric) {
  std::mt19937_64 rng(5);
  for (std::size_t half = 1; half <= 16; ++half) {
    const auto s = testing::random_values(rng, 2 * half);
    const auto h = static_cast<std::ptrdiff_t>(half);
    EXPECT_NEAR(static_score(s, 0, h), -static_score(s, h, 2 * h), 1e-12);
  }
}

TEST(ScoringParams, ValidationAndDefaults) {
  ScoringParams p;
  EXPECT_EQ(p.delta, 5e-4);
  EXPECT_EQ(p.topk, 3);
  EXPECT_NO_THROW(p.validate());
  p.nms_iou = 1.5;
  EXPECT_THROW(p.validate(), InputError);
  p = {};
  p.min_frames = 0;
  EXPECT_THROW(p.validate(), InputError);
  p = {};
  p.delta = -1;
  EXPECT_THROW(p.validate(), InputError);
}

}  // namespace
}  // namespace tfvtg
