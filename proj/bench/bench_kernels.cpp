// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "topocp/batch.hpp"
#include "topocp/kernels.hpp"

using namespace topocp;

namespace {

BinaryMask sparse_seeds(std::size_t side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.02);
  std::vector<std::uint8_t> v(side * side);
  for (auto& x : v) x = coin(rng);
  return BinaryMask(side, side, std::move(v));
}

RealRaster noise(std::size_t side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(side * side);
  for (auto& x : v) x = u(rng);
  return RealRaster(side, side, std::move(v));
}

void make_batch(std::size_t n, std::vector<LikelihoodMap>& preds, std::vector<BinaryMask>& gts) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.4);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> p(64 * 64);
    std::vector<std::uint8_t> g(64 * 64);
    for (auto& x : p) x = u(rng);
    for (auto& x : g) x = coin(rng);
    preds.emplace_back(64, 64, std::move(p));
    gts.emplace_back(64, 64, std::move(g));
  }
}

void BM_DistanceTransform(benchmark::State& state) {
  const auto seeds = sparse_seeds(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(squared_distance_transform(seeds, {}));
}

void BM_DistanceTransformReference(benchmark::State& state) {
  const auto seeds = sparse_seeds(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::squared_distance_transform(seeds, {}));
}

void BM_Blur(benchmark::State& state) {
  const auto img = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(img, 2.0));
}

void BM_BlurReference(benchmark::State& state) {
  const auto img = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::gaussian_blur(img, 2.0));
}

void BM_TopoLossBatch(benchmark::State& state) {
  std::vector<LikelihoodMap> preds;
  std::vector<BinaryMask> gts;
  make_batch(static_cast<std::size_t>(state.range(0)), preds, gts);
  for (auto _ : state) benchmark::DoNotOptimize(topo_loss_batch(preds, gts));
}

void BM_TopoLossBatchReference(benchmark::State& state) {
  std::vector<LikelihoodMap> preds;
  std::vector<BinaryMask> gts;
  make_batch(static_cast<std::size_t>(state.range(0)), preds, gts);
  for (auto _ : state) benchmark::DoNotOptimize(reference::topo_loss_batch(preds, gts));
}

}  // namespace

BENCHMARK(BM_DistanceTransform)->Arg(64)->Arg(256);
BENCHMARK(BM_DistanceTransformReference)->Arg(64)->Arg(256);
BENCHMARK(BM_Blur)->Arg(256)->Arg(1024);
BENCHMARK(BM_BlurReference)->Arg(256)->Arg(1024);
BENCHMARK(BM_TopoLossBatch)->Arg(16);
BENCHMARK(BM_TopoLossBatchReference)->Arg(16);

BENCHMARK_MAIN();
