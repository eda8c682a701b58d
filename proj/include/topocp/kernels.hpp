#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "topocp/raster.hpp"

namespace topocp {

/// OpenMP-parallel raster kernels. Each has a serial reference in
/// topocp::reference with the same contract, kept for tests and benchmarks.

/// Exact squared Euclidean distance (in mm^2) from every pixel center to the
/// nearest seed pixel, with anisotropic spacing. Pixels are infinitely far
/// when there is no seed. Separable lower-envelope algorithm: one parallel
/// pass over columns, one over rows.
std::vector<double> squared_distance_transform(const BinaryMask& seeds, Spacing spacing);

/// Separable Gaussian blur with standard deviation sigma (pixels), kernel
/// truncated at 3 sigma, edge-replicated borders. sigma == 0 is the identity.
RealRaster gaussian_blur(const RealRaster& image, double sigma);

/// Foreground pixels with at least one 4-neighbor in background; the image
/// border counts as background.
BinaryMask boundary_of(const BinaryMask& mask);

namespace reference {

/// Brute force: for every pixel, scan all seeds.
std::vector<double> squared_distance_transform(const BinaryMask& seeds, Spacing spacing);

/// Direct 2D convolution with the same truncated, renormalized kernel.
RealRaster gaussian_blur(const RealRaster& image, double sigma);

}  // namespace reference

/// Normalized 1D Gaussian taps, radius ceil(3 sigma).
std::vector<double> gaussian_taps(double sigma);

}  // namespace topocp
