#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "topocp/topo_loss.hpp"

#include "fixtures.hpp"
#include "gradient_check.hpp"
#include "oracles.hpp"

using namespace topocp;

namespace {

std::size_t nonzero_count(const RealRaster& g) {
  std::size_t n = 0;
  for (double v : g.values()) n += v != 0.0;
  return n;
}

}  // namespace

TEST(GtDiagram, Examples) {
  EXPECT_TRUE(gt_diagram(BinaryMask(6, 6, 0)).pairs.empty());

  const auto full = gt_diagram(BinaryMask(6, 6, 1));
  ASSERT_EQ(full.pairs.size(), 1u);
  EXPECT_EQ(full.pairs[0].dim, 0);
  EXPECT_EQ(full.pairs[0].birth, 1.0);
  EXPECT_EQ(full.pairs[0].death, 0.0);

  const auto mask = binarize(fixture::overlay(fixture::ring(16, 2, 7, 1.0),
                                              fixture::block(16, 16, 11, 14, 11, 14, 1.0)));
  const auto b = oracle::flood_fill_betti(mask);
  ASSERT_EQ(b, (BettiPair{2, 1}));
  const auto d = gt_diagram(mask);
  EXPECT_EQ(d.count(0), 2u);
  EXPECT_EQ(d.count(1), 1u);
  for (const auto& p : d.pairs) {
    EXPECT_EQ(p.birth, 1.0);
    EXPECT_EQ(p.death, 0.0);
  }
}

TEST(GtDiagram, CountsEqualBettiNumbers) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mask = oracle::random_mask(3 + trial % 20, 4 + trial % 13, 0.45, rng);
    const auto b = oracle::flood_fill_betti(mask);
    const auto d = gt_diagram(mask);
    EXPECT_EQ(d.count(0), b.b0);
    EXPECT_EQ(d.count(1), b.b1);
  }
}

TEST(TopoLoss, IdenticalPredictionIsFree) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto gt = oracle::random_mask(12, 12, 0.5, rng);
    const auto r = topo_loss(as_likelihood(gt), gt);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(nonzero_count(r.grad), 0u);
  }
}

TEST(TopoLoss, DimmedRing) {
  const auto pred = fixture::ring(16, 4, 11, 0.6);
  const auto gt = binarize(fixture::ring(16, 4, 11, 1.0));
  const auto r = topo_loss(pred, gt);
  EXPECT_NEAR(r.value, 0.32, 1e-12);
  EXPECT_NEAR(r.grad(4, 4), -0.8, 1e-12);
  EXPECT_NEAR(r.grad(11, 10), -0.8, 1e-12);
  EXPECT_EQ(nonzero_count(r.grad), 2u);
  EXPECT_NEAR(r.value, r.matching.total_cost(), 1e-12);
}

TEST(TopoLoss, SpuriousBlobGoesToDiagonal) {
  TopoLossOptions dim0_only;
  dim0_only.dim1 = false;
  const auto r = topo_loss(fixture::spurious_blob(), fixture::spurious_blob_gt(), dim0_only);
  EXPECT_NEAR(r.value, 0.045, 1e-12);
  EXPECT_NEAR(r.grad(10, 10), 0.3, 1e-12);
  EXPECT_EQ(nonzero_count(r.grad), 1u);
  const auto& edges = r.matching.dims[0].assignments;
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_TRUE(r.matching.dims[1].assignments.empty());
}

TEST(TopoLoss, GradientOnlyAtCriticalPixels) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pred = oracle::random_generic(12, 12, rng);
    const auto gt = oracle::random_mask(12, 12, 0.5, rng);
    const auto r = topo_loss(pred, gt);
    std::vector<char> critical(pred.size(), 0);
    for (const auto& p : compute_persistence(pred).pairs) {
      critical[pred.index(p.birth_pixel)] = 1;
      if (p.death_pixel) critical[pred.index(*p.death_pixel)] = 1;
    }
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (!critical[i]) EXPECT_EQ(r.grad[i], 0.0);
    EXPECT_NEAR(r.value, r.matching.total_cost(), 1e-9);
  }
}

TEST(TopoLoss, MatchesFiniteDifferences) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 10) {
    const auto pred = oracle::random_generic(10, 10, rng);
    const auto gt = oracle::random_mask(10, 10, 0.4, rng);
    const auto r = gradcheck::check(pred, gt, 1e-4, 1e-3, 1e-6);
    if (!r.generic) continue;
    ++checked;
    EXPECT_EQ(r.failures, 0u) << "worst rel " << r.worst_rel << " worst abs " << r.worst_abs;
  }
}

TEST(TopoLoss, KinkDetectedAtMatchingTie) {
  // Two predicted dim-0 points with equal savings against one (1,0) target.
  const auto map = fixture::overlay(fixture::block(12, 12, 1, 3, 1, 3, 0.8, 0.1),
                                    fixture::block(12, 12, 8, 10, 8, 10, 0.8, 0.1));
  const auto gt = binarize(fixture::block(12, 12, 1, 3, 1, 3, 1.0));
  EXPECT_FALSE(gradcheck::check(map, gt, 1e-4, 1e-3, 1e-6).generic);
}

TEST(TopoLoss, SmallStepAgainstGradientDescends) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pred = oracle::random_generic(12, 12, rng, 0.1, 0.9);
    const auto gt = oracle::random_mask(12, 12, 0.5, rng);
    const auto r = topo_loss(pred, gt);
    if (r.value == 0.0) continue;
    std::vector<double> stepped(pred.values().begin(), pred.values().end());
    for (std::size_t i = 0; i < stepped.size(); ++i) stepped[i] -= 1e-5 * r.grad[i];
    EXPECT_LT(topo_loss(LikelihoodMap(12, 12, stepped), gt).value, r.value);
  }
}

TEST(TopoLoss, WeightScalesValueAndGradient) {
  std::mt19937_64 rng(9);
  const auto pred = oracle::random_generic(14, 14, rng);
  const auto gt = oracle::random_mask(14, 14, 0.5, rng);
  const auto base = topo_loss(pred, gt);
  for (double w : {0.0, 0.25, 3.0}) {
    TopoLossOptions o;
    o.weight = w;
    const auto r = topo_loss(pred, gt, o);
    EXPECT_EQ(r.value, w * base.value);
    for (std::size_t i = 0; i < pred.size(); ++i) EXPECT_EQ(r.grad[i], w * base.grad[i]);
  }
}

TEST(TopoLoss, DimsAreAdditive) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pred = oracle::random_generic(12, 12, rng);
    const auto gt = oracle::random_mask(12, 12, 0.5, rng);
    TopoLossOptions only0, only1;
    only0.dim1 = false;
    only1.dim0 = false;
    const auto a = topo_loss(pred, gt, only0);
    const auto b = topo_loss(pred, gt, only1);
    const auto both = topo_loss(pred, gt);
    EXPECT_NEAR(both.value, a.value + b.value, 1e-12);
    for (std::size_t i = 0; i < pred.size(); ++i)
      EXPECT_NEAR(both.grad[i], a.grad[i] + b.grad[i], 1e-12);
  }
}

TEST(TopoLoss, SolversAgree) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pred = oracle::random_generic(12, 12, rng);
    const auto gt = oracle::random_mask(12, 12, 0.5, rng);
    TopoLossOptions hungarian;
    hungarian.solver = MatchSolver::Hungarian;
    EXPECT_NEAR(topo_loss(pred, gt).value, topo_loss(pred, gt, hungarian).value, 1e-12);
  }
}

TEST(TopoLoss, Errors) {
  const LikelihoodMap pred(8, 8, 0.5);
  try {
    topo_loss(pred, BinaryMask(8, 9, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  TopoLossOptions negative;
  negative.weight = -1.0;
  EXPECT_THROW(topo_loss(pred, BinaryMask(8, 8, 0), negative), Error);
}
