#include "topocp/batch.hpp"

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace topocp {
namespace {

void check_lengths(std::size_t preds, std::size_t gts) {
  if (preds != gts) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(preds) + " predictions vs " +
                                               std::to_string(gts) + " ground truths");
  }
}

int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
  return 1;
#endif
}

// Runs fn(i) for i in [0, n) across threads; the first exception is rethrown
// on the calling thread after the loop.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::exception_ptr failure;
  std::mutex guard;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads))
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<PersistenceDiagram> compute_persistence_batch(std::span<const LikelihoodMap> maps,
                                                          int threads) {
  std::vector<PersistenceDiagram> out(maps.size());
  parallel_for(maps.size(), threads, [&](std::size_t i) { out[i] = compute_persistence(maps[i]); });
  return out;
}

std::vector<TopoLossResult> topo_loss_batch(std::span<const LikelihoodMap> preds,
                                            std::span<const BinaryMask> gts,
                                            const TopoLossOptions& options, int threads) {
  check_lengths(preds.size(), gts.size());
  std::vector<TopoLossResult> out(preds.size());
  parallel_for(preds.size(), threads,
               [&](std::size_t i) { out[i] = topo_loss(preds[i], gts[i], options); });
  return out;
}

std::vector<MetricsReport> evaluate_batch(std::span<const LikelihoodMap> preds,
                                          std::span<const BinaryMask> gts, Spacing spacing,
                                          double threshold, int threads) {
  check_lengths(preds.size(), gts.size());
  std::vector<MetricsReport> out(preds.size());
  parallel_for(preds.size(), threads, [&](std::size_t i) {
    out[i] = evaluate(preds[i], gts[i], spacing, threshold);
  });
  return out;
}

namespace reference {

std::vector<PersistenceDiagram> compute_persistence_batch(std::span<const LikelihoodMap> maps) {
  std::vector<PersistenceDiagram> out;
  for (const auto& m : maps) out.push_back(compute_persistence(m));
  return out;
}

std::vector<TopoLossResult> topo_loss_batch(std::span<const LikelihoodMap> preds,
                                            std::span<const BinaryMask> gts,
                                            const TopoLossOptions& options) {
  check_lengths(preds.size(), gts.size());
  std::vector<TopoLossResult> out;
  for (std::size_t i = 0; i < preds.size(); ++i) out.push_back(topo_loss(preds[i], gts[i], options));
  return out;
}

std::vector<MetricsReport> evaluate_batch(std::span<const LikelihoodMap> preds,
                                          std::span<const BinaryMask> gts, Spacing spacing,
                                          double threshold) {
  check_lengths(preds.size(), gts.size());
  std::vector<MetricsReport> out;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out.push_back(evaluate(preds[i], gts[i], spacing, threshold));
  }
  return out;
}

}  // namespace reference
}  // namespace topocp
