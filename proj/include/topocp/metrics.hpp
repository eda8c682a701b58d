#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topocp/raster.hpp"

namespace topocp {

struct MetricsReport {
  double dsc = 0.0;
  std::optional<double> asd_mm;   // absent when either mask is empty
  std::optional<double> hd95_mm;  // absent when either mask is empty
  double betti0_error = 0.0;
};

struct SurfaceDistances {
  double asd_mm = 0.0;
  double hd95_mm = 0.0;
};

/// 2|a∩b| / (|a|+|b|); 1 when both are empty.
double dice(const BinaryMask& a, const BinaryMask& b);

/// Pools the distances from each boundary pixel of a to the boundary of b
/// and vice versa; ASD is the mean, HD95 the linearly interpolated 95th
/// percentile of the pooled set. Throws EmptyMask if either mask is empty.
SurfaceDistances surface_distances(const BinaryMask& a, const BinaryMask& b, Spacing spacing);

/// Linear interpolation between order statistics at rank q*(n-1). Sorts in place.
double percentile(std::vector<double>& values, double q);

/// Mean |b0(pred) - b0(gt)| over pairs.
double betti0_error(std::span<const BinaryMask> pred_masks, std::span<const BinaryMask> gt_masks);

MetricsReport evaluate(const LikelihoodMap& pred, const BinaryMask& gt, Spacing spacing = {},
                       double threshold = kDefaultThreshold);

/// Single JSON object with keys dsc, asd_mm, hd95_mm, betti0_error; absent
/// distances are omitted.
std::string to_json(const MetricsReport& report);

}  // namespace topocp
