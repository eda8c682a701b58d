#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "topocp/batch.hpp"
#include "topocp/kernels.hpp"

#include "oracles.hpp"

using namespace topocp;

TEST(DistanceTransform, MatchesBruteForce) {
  std::mt19937_64 rng(40);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  std::uniform_real_distribution<double> sp(0.2, 4.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto seeds = oracle::random_mask(dim(rng), dim(rng), 0.05 + 0.01 * (trial % 10), rng);
    const Spacing s(sp(rng), sp(rng));
    const auto fast = squared_distance_transform(seeds, s);
    const auto slow = reference::squared_distance_transform(seeds, s);
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      if (std::isinf(slow[i])) EXPECT_TRUE(std::isinf(fast[i]));
      else EXPECT_NEAR(fast[i], slow[i], 1e-9 * (1 + slow[i]));
    }
  }
}

TEST(DistanceTransform, NoSeedsIsInfinite) {
  for (double v : squared_distance_transform(BinaryMask(3, 5, 0), {})) EXPECT_TRUE(std::isinf(v));
}

TEST(Boundary, InteriorRemoved) {
  const BinaryMask full(5, 5, 1);
  const auto edge = boundary_of(full);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 5; ++c)
      EXPECT_EQ(edge(r, c), (r == 0 || c == 0 || r == 4 || c == 4) ? 1 : 0);
}

TEST(GaussianBlur, MatchesDirectConvolution) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double sigma : {0.0, 0.5, 1.0, 2.3}) {
    std::vector<double> v(23 * 17);
    for (auto& x : v) x = u(rng);
    const RealRaster img(23, 17, v);
    const auto fast = gaussian_blur(img, sigma);
    const auto slow = reference::gaussian_blur(img, sigma);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12);
  }
}

TEST(GaussianBlur, TapsNormalized) {
  for (double sigma : {0.3, 1.0, 4.0}) {
    const auto taps = gaussian_taps(sigma);
    EXPECT_EQ(taps.size(), 2 * static_cast<std::size_t>(std::ceil(3 * sigma)) + 1);
    EXPECT_NEAR(std::accumulate(taps.begin(), taps.end(), 0.0), 1.0, 1e-12);
  }
  EXPECT_NEAR(gaussian_blur(RealRaster(4, 4, 0.25), 1.5)[5], 0.25, 1e-15);
}

TEST(Batch, MatchesSerialReference) {
  std::mt19937_64 rng(42);
  std::vector<LikelihoodMap> preds;
  std::vector<BinaryMask> gts;
  for (int i = 0; i < 12; ++i) {
    preds.push_back(oracle::random_generic(16, 16, rng));
    gts.push_back(oracle::random_mask(16, 16, 0.4, rng));
  }
  for (int threads : {1, 3}) {
    EXPECT_EQ(compute_persistence_batch(preds, threads), reference::compute_persistence_batch(preds));
    const auto fast = topo_loss_batch(preds, gts, {}, threads);
    const auto slow = reference::topo_loss_batch(preds, gts, {});
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      EXPECT_EQ(fast[i].value, slow[i].value);
      EXPECT_EQ(fast[i].grad, slow[i].grad);
    }
    const auto mf = evaluate_batch(preds, gts, {}, 0.5, threads);
    const auto ms = reference::evaluate_batch(preds, gts, {}, 0.5);
    for (std::size_t i = 0; i < mf.size(); ++i) EXPECT_EQ(to_json(mf[i]), to_json(ms[i]));
  }
}

TEST(Batch, ErrorsPropagate) {
  std::vector<LikelihoodMap> preds{LikelihoodMap(8, 8, 0.5), LikelihoodMap(8, 8, 0.5)};
  std::vector<BinaryMask> gts{BinaryMask(8, 8, 1), BinaryMask(9, 8, 1)};
  try {
    topo_loss_batch(preds, gts, {}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  const std::vector<BinaryMask> one{BinaryMask(8, 8, 1)};
  try {
    evaluate_batch(preds, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}
