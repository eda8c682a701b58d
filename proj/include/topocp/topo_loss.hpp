#pragma once

#include <vector>

#include "topocp/matching.hpp"
#include "topocp/persistence.hpp"
#include "topocp/raster.hpp"

namespace topocp {

/// Diagram of a binary ground truth: b0 pairs and b1 pairs, all at (1, 0).
/// Critical pixels come from the persistence of the mask itself.
PersistenceDiagram gt_diagram(const BinaryMask& gt);

struct TopoLossOptions {
  bool dim0 = true;
  bool dim1 = true;
  double weight = 1.0;
  MatchSolver solver = MatchSolver::Auto;
};

struct TopoLossResult {
  double value = 0.0;
  /// d value / d f(p), same shape as the prediction.
  RealRaster grad;
  DiagramMatching matching;
};

/// Weighted squared-distance matching cost between the prediction's diagram
/// and the ground truth's, with its exact gradient.
///
/// Gradient flows only through critical pixels of predicted pairs. A pair
/// whose death is the filtration floor (0) gets no death gradient, exactly
/// like an essential class.
TopoLossResult topo_loss(const LikelihoodMap& pred, const BinaryMask& gt,
                         const TopoLossOptions& options = {});

/// Same as topo_loss, reusing a precomputed ground-truth diagram.
TopoLossResult topo_loss(const LikelihoodMap& pred, const PersistenceDiagram& gt,
                         const TopoLossOptions& options = {});

}  // namespace topocp
