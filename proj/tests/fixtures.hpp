#pragma once

#include <cstdint>
#include <vector>

#include "topocp/raster.hpp"

namespace fixture {

/// Square ring with a 1-pixel wall from (lo,lo) to (hi,hi) inclusive, on zero background.
inline topocp::LikelihoodMap ring(std::size_t side, std::size_t lo, std::size_t hi, double value) {
  std::vector<double> v(side * side, 0.0);
  for (std::size_t r = lo; r <= hi; ++r)
    for (std::size_t c = lo; c <= hi; ++c)
      if (r == lo || r == hi || c == lo || c == hi) v[r * side + c] = value;
  return topocp::LikelihoodMap(side, side, std::move(v));
}

/// Filled rectangle [r0, r1) x [c0, c1) at `value` on `base` background.
inline topocp::LikelihoodMap block(std::size_t h, std::size_t w, std::size_t r0, std::size_t r1,
                                   std::size_t c0, std::size_t c1, double value,
                                   double base = 0.0) {
  std::vector<double> v(h * w, base);
  for (std::size_t r = r0; r < r1; ++r)
    for (std::size_t c = c0; c < c1; ++c) v[r * w + c] = value;
  return topocp::LikelihoodMap(h, w, std::move(v));
}

/// Pointwise max of two same-shape maps.
inline topocp::LikelihoodMap overlay(const topocp::LikelihoodMap& a, const topocp::LikelihoodMap& b) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] > b[i] ? a[i] : b[i];
  return topocp::LikelihoodMap(a.height(), a.width(), std::move(v));
}

/// 16x16 ring at 0.8 on 0: the diagram fixture.
inline topocp::LikelihoodMap ring_08() { return ring(16, 4, 11, 0.8); }

/// 8x8 map with a 3x3 block at 1.0.
inline topocp::LikelihoodMap block_8() { return block(8, 8, 2, 5, 2, 5, 1.0); }

/// 16x16: a 4x4 structure at 1.0 plus a separate 2x2 blob at 0.3.
inline topocp::LikelihoodMap spurious_blob() {
  return overlay(block(16, 16, 2, 6, 2, 6, 1.0), block(16, 16, 10, 12, 10, 12, 0.3));
}

inline topocp::BinaryMask spurious_blob_gt() {
  return topocp::binarize(block(16, 16, 2, 6, 2, 6, 1.0), 0.5);
}

}  // namespace fixture
