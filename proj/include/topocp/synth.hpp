#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "topocp/persistence.hpp"
#include "topocp/raster.hpp"

namespace topocp {

/// Parameters of a synthetic ribbon image with prescribed topology.
struct RibbonSpec {
  std::uint64_t seed = 0;
  std::size_t size = 64;
  std::size_t components = 1;
  std::size_t holes = 0;
  std::size_t thickness = 3;
  std::size_t break_count = 0;
  double blur_radius = 1.0;

  /// Throws InfeasibleSpec for invariant violations or geometry that cannot fit.
  void validate() const;
};

struct RibbonSample {
  LikelihoodMap clean_likelihood;
  BinaryMask gt;
  LikelihoodMap degraded_likelihood;
};

/// Draws `components` ribbons: the first `holes` are closed curves, the rest
/// open arcs. Each ribbon lives in its own grid cell so components never touch.
/// The gt Betti numbers are checked before returning. Every injected break is
/// checked to change the Betti numbers of binarize(degraded, 0.5).
RibbonSample gen_ribbon(const RibbonSpec& spec);

inline constexpr std::size_t kPatchSide = 64;

struct Patch {
  LikelihoodMap image;
  BinaryMask gt;
  PixelCoord origin;
};

using PatchSet = std::vector<Patch>;

/// 64x64 windows at multiples of `stride`, with the last row/column of
/// windows clamped to the image edge; keeps windows whose gt is non-empty.
PatchSet extract_patches(const LikelihoodMap& image, const BinaryMask& gt, std::size_t stride);

/// Window origins along one axis of length `extent`.
std::vector<std::size_t> window_origins(std::size_t extent, std::size_t stride,
                                        std::size_t window = kPatchSide);

/// Horizontal flip, then vertical flip, then counter-clockwise quarter turns.
template <typename T, typename R>
Raster<T, R> augment_raster(const Raster<T, R>& in, bool flip_h, bool flip_v, int quarter_turns);

struct AugmentedPatch {
  LikelihoodMap image;
  BinaryMask gt;
};

AugmentedPatch augment(const LikelihoodMap& image, const BinaryMask& gt, bool flip_h, bool flip_v,
                       int quarter_turns);

/// Samples each flip with probability 1/2 and quarter_turns uniformly in {0..3}.
AugmentedPatch augment_random(const LikelihoodMap& image, const BinaryMask& gt, std::mt19937_64& rng);

std::string to_json(const RibbonSpec& spec);
RibbonSpec ribbon_spec_from_json(const std::string& text);

// ---------------------------------------------------------------------------

template <typename T, typename R>
Raster<T, R> augment_raster(const Raster<T, R>& in, bool flip_h, bool flip_v, int quarter_turns) {
  if (quarter_turns < 0 || quarter_turns > 3) {
    throw Error(ErrorCode::InvalidArgument, "quarter_turns must be in {0,1,2,3}");
  }
  std::size_t h = in.height();
  std::size_t w = in.width();
  std::vector<T> cur(in.values().begin(), in.values().end());
  std::vector<T> next(cur.size());
  if (flip_h) {
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) next[r * w + c] = cur[r * w + (w - 1 - c)];
    cur.swap(next);
  }
  if (flip_v) {
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) next[r * w + c] = cur[(h - 1 - r) * w + c];
    cur.swap(next);
  }
  for (int t = 0; t < quarter_turns; ++t) {
    // CCW: out(r, c) = in(c, w - 1 - r); output is w x h.
    for (std::size_t r = 0; r < w; ++r)
      for (std::size_t c = 0; c < h; ++c) next[r * h + c] = cur[c * w + (w - 1 - r)];
    cur.swap(next);
    std::swap(h, w);
  }
  return Raster<T, R>(h, w, std::move(cur));
}

}  // namespace topocp
