#include "topocp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include <nlohmann/json.hpp>

#include "topocp/kernels.hpp"
#include "topocp/persistence.hpp"

namespace topocp {
namespace {

std::size_t count_foreground(const BinaryMask& m) {
  return static_cast<std::size_t>(std::count(m.values().begin(), m.values().end(), 1));
}

// Distances from each boundary pixel of `from` to the nearest boundary pixel of `to`.
void directed_distances(const BinaryMask& from_boundary, const BinaryMask& to_boundary,
                        Spacing spacing, std::vector<double>& out) {
  const auto field = squared_distance_transform(to_boundary, spacing);
  for (std::size_t i = 0; i < from_boundary.size(); ++i) {
    if (from_boundary[i]) out.push_back(std::sqrt(field[i]));
  }
}

}  // namespace

double dice(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "dice");
  std::size_t both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) both += (a[i] & b[i]);
  const std::size_t total = count_foreground(a) + count_foreground(b);
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(total);
}

double percentile(std::vector<double>& values, double q) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "percentile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

SurfaceDistances surface_distances(const BinaryMask& a, const BinaryMask& b, Spacing spacing) {
  require_same_shape(a, b, "surface_distances");
  if (count_foreground(a) == 0 || count_foreground(b) == 0) {
    throw Error(ErrorCode::EmptyMask, "surface distance undefined for an empty mask");
  }
  const auto edge_a = boundary_of(a);
  const auto edge_b = boundary_of(b);
  std::vector<double> pooled;
  directed_distances(edge_a, edge_b, spacing, pooled);
  directed_distances(edge_b, edge_a, spacing, pooled);
  SurfaceDistances result;
  result.asd_mm = std::accumulate(pooled.begin(), pooled.end(), 0.0) /
                  static_cast<double>(pooled.size());
  result.hd95_mm = percentile(pooled, 0.95);
  return result;
}

double betti0_error(std::span<const BinaryMask> pred_masks, std::span<const BinaryMask> gt_masks) {
  if (pred_masks.size() != gt_masks.size()) {
    throw Error(ErrorCode::LengthMismatch, "betti0_error: " + std::to_string(pred_masks.size()) +
                                               " predictions vs " +
                                               std::to_string(gt_masks.size()) + " ground truths");
  }
  if (pred_masks.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < pred_masks.size(); ++i) {
    require_same_shape(pred_masks[i], gt_masks[i], "betti0_error");
    const auto p = static_cast<double>(betti_numbers(pred_masks[i]).b0);
    const auto g = static_cast<double>(betti_numbers(gt_masks[i]).b0);
    total += std::abs(p - g);
  }
  return total / static_cast<double>(pred_masks.size());
}

MetricsReport evaluate(const LikelihoodMap& pred, const BinaryMask& gt, Spacing spacing,
                       double threshold) {
  require_same_shape(pred, gt, "evaluate");
  const auto mask = binarize(pred, threshold);
  MetricsReport report;
  report.dsc = dice(mask, gt);
  report.betti0_error = betti0_error(std::span(&mask, 1), std::span(&gt, 1));
  if (count_foreground(mask) > 0 && count_foreground(gt) > 0) {
    const auto sd = surface_distances(mask, gt, spacing);
    report.asd_mm = sd.asd_mm;
    report.hd95_mm = sd.hd95_mm;
  }
  return report;
}

std::string to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["dsc"] = report.dsc;
  if (report.asd_mm) j["asd_mm"] = *report.asd_mm;
  if (report.hd95_mm) j["hd95_mm"] = *report.hd95_mm;
  j["betti0_error"] = report.betti0_error;
  return j.dump();
}

}  // namespace topocp
