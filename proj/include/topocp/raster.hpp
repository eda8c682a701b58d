#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topocp/error.hpp"

namespace topocp {

struct PixelCoord {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
  friend auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

/// Physical size of one pixel step in millimeters.
struct Spacing {
  double dy = 1.0;
  double dx = 1.0;

  Spacing() = default;
  Spacing(double row_step, double col_step);
};

namespace detail {

struct LikelihoodRule {
  static bool valid(double v) { return v >= 0.0 && v <= 1.0; }
  static constexpr const char* kName = "likelihood";
};

struct MaskRule {
  static bool valid(std::uint8_t v) { return v <= 1; }
  static constexpr const char* kName = "mask";
};

struct AnyRule {
  static bool valid(double) { return true; }
  static constexpr const char* kName = "raster";
};

}  // namespace detail

/// Dense row-major 2D raster. Immutable once constructed; the value rule is
/// checked on construction.
template <typename T, typename Rule>
class Raster {
 public:
  using value_type = T;

  Raster() = default;

  Raster(std::size_t height, std::size_t width, T fill)
      : Raster(height, width, std::vector<T>(height * width, fill)) {}

  Raster(std::size_t height, std::size_t width, std::vector<T> values)
      : height_(height), width_(width), values_(std::move(values)) {
    if (height_ == 0 || width_ == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(Rule::kName) + " dimensions must be positive");
    }
    if (values_.size() != height_ * width_) {
      throw Error(ErrorCode::ShapeMismatch,
                  std::string(Rule::kName) + " has " +
                      std::to_string(values_.size()) + " values for " +
                      std::to_string(height_) + "x" + std::to_string(width_));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!Rule::valid(values_[i])) {
        throw Error(ErrorCode::OutOfRange,
                    std::string(Rule::kName) + " value out of range at index " +
                        std::to_string(i));
      }
    }
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  const T& operator[](std::size_t index) const { return values_[index]; }
  const T& operator()(std::size_t row, std::size_t col) const {
    return values_[row * width_ + col];
  }
  const T& at(PixelCoord p) const { return values_[p.row * width_ + p.col]; }

  std::span<const T> values() const noexcept { return values_; }

  PixelCoord coord(std::size_t index) const {
    return {index / width_, index % width_};
  }
  std::size_t index(PixelCoord p) const { return p.row * width_ + p.col; }

  template <typename U, typename R>
  bool same_shape(const Raster<U, R>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> values_;
};

/// Per-pixel foreground probabilities in [0,1].
using LikelihoodMap = Raster<double, detail::LikelihoodRule>;
/// {0,1} labels.
using BinaryMask = Raster<std::uint8_t, detail::MaskRule>;
/// Unconstrained real raster (gradients, distance fields).
using RealRaster = Raster<double, detail::AnyRule>;

inline constexpr double kDefaultThreshold = 0.5;

/// output(p) = 1 iff map(p) >= threshold.
BinaryMask binarize(const LikelihoodMap& map, double threshold = kDefaultThreshold);

/// A mask viewed as a 0/1 likelihood.
LikelihoodMap as_likelihood(const BinaryMask& mask);

/// Throws ShapeMismatch unless both rasters have the same dimensions.
template <typename A, typename RA, typename B, typename RB>
void require_same_shape(const Raster<A, RA>& a, const Raster<B, RB>& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": " + std::to_string(a.height()) + "x" +
                    std::to_string(a.width()) + " vs " +
                    std::to_string(b.height()) + "x" +
                    std::to_string(b.width()));
  }
}

}  // namespace topocp
