#include "topocp/topo_loss.hpp"

#include <cmath>

namespace topocp {

PersistenceDiagram gt_diagram(const BinaryMask& gt) {
  // On a 0/1 map every positive-persistence pair is exactly (1, 0).
  return compute_persistence(as_likelihood(gt));
}

TopoLossResult topo_loss(const LikelihoodMap& pred, const BinaryMask& gt,
                         const TopoLossOptions& options) {
  require_same_shape(pred, gt, "topo_loss");
  return topo_loss(pred, gt_diagram(gt), options);
}

TopoLossResult topo_loss(const LikelihoodMap& pred, const PersistenceDiagram& gt,
                         const TopoLossOptions& options) {
  if (gt.source_height != pred.height() || gt.source_width != pred.width()) {
    throw Error(ErrorCode::ShapeMismatch, "topo_loss: gt diagram shape differs from prediction");
  }
  if (!(options.weight >= 0.0) || !std::isfinite(options.weight)) {
    throw Error(ErrorCode::InvalidArgument, "topo_loss weight must be finite and >= 0");
  }
  const auto pred_diagram = compute_persistence(pred);
  std::vector<double> grad(pred.size(), 0.0);
  TopoLossResult result;

  for (int dim = 0; dim < 2; ++dim) {
    if ((dim == 0 && !options.dim0) || (dim == 1 && !options.dim1)) continue;
    const auto pred_pairs = pred_diagram.of_dim(dim);
    const auto pred_pts = points_of(pred_diagram, dim);
    const auto gt_pts = points_of(gt, dim);
    auto& matched = result.matching.dims[static_cast<std::size_t>(dim)];
    matched = match_points(pred_pts, gt_pts, options.solver);

    for (const auto& edge : matched.assignments) {
      if (!edge.pred) continue;
      const auto& pair = pred_pairs[*edge.pred];
      double d_birth = 0.0;
      double d_death = 0.0;
      if (edge.gt) {
        d_birth = 2.0 * (pair.birth - gt_pts[*edge.gt].birth);
        d_death = 2.0 * (pair.death - gt_pts[*edge.gt].death);
      } else {
        d_birth = pair.birth - pair.death;
        d_death = pair.death - pair.birth;
      }
      grad[pred.index(pair.birth_pixel)] += d_birth;
      if (pair.death_pixel && pair.death > 0.0) {
        grad[pred.index(*pair.death_pixel)] += d_death;
      }
    }
  }
  result.value = options.weight * result.matching.total_cost();
  for (double& g : grad) g *= options.weight;
  result.grad = RealRaster(pred.height(), pred.width(), std::move(grad));
  return result;
}

}  // namespace topocp
