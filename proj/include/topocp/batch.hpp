#pragma once

#include <span>
#include <vector>

#include "topocp/metrics.hpp"
#include "topocp/persistence.hpp"
#include "topocp/topo_loss.hpp"

namespace topocp {

/// Patch-parallel drivers. A single persistence computation is sequential,
/// so parallelism comes from independent patches. `threads` <= 0 uses the
/// OpenMP default. Results are in input order and identical to the serial
/// references.

std::vector<PersistenceDiagram> compute_persistence_batch(std::span<const LikelihoodMap> maps,
                                                          int threads = 0);

std::vector<TopoLossResult> topo_loss_batch(std::span<const LikelihoodMap> preds,
                                            std::span<const BinaryMask> gts,
                                            const TopoLossOptions& options = {}, int threads = 0);

std::vector<MetricsReport> evaluate_batch(std::span<const LikelihoodMap> preds,
                                          std::span<const BinaryMask> gts, Spacing spacing = {},
                                          double threshold = kDefaultThreshold, int threads = 0);

namespace reference {

std::vector<PersistenceDiagram> compute_persistence_batch(std::span<const LikelihoodMap> maps);
std::vector<TopoLossResult> topo_loss_batch(std::span<const LikelihoodMap> preds,
                                            std::span<const BinaryMask> gts,
                                            const TopoLossOptions& options = {});
std::vector<MetricsReport> evaluate_batch(std::span<const LikelihoodMap> preds,
                                          std::span<const BinaryMask> gts, Spacing spacing = {},
                                          double threshold = kDefaultThreshold);

}  // namespace reference
}  // namespace topocp
