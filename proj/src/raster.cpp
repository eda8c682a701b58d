#include "topocp/raster.hpp"

#include <cmath>

namespace topocp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Spacing::Spacing(double row_step, double col_step) : dy(row_step), dx(col_step) {
  if (!(dy > 0.0) || !(dx > 0.0) || !std::isfinite(dy) || !std::isfinite(dx)) {
    throw Error(ErrorCode::InvalidArgument, "spacing must be positive and finite");
  }
}

BinaryMask binarize(const LikelihoodMap& map, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0,1]");
  }
  std::vector<std::uint8_t> out(map.size());
  const auto values = map.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = values[i] >= threshold ? 1 : 0;
  }
  return BinaryMask(map.height(), map.width(), std::move(out));
}

LikelihoodMap as_likelihood(const BinaryMask& mask) {
  std::vector<double> out(mask.size());
  const auto values = mask.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[i];
  return LikelihoodMap(mask.height(), mask.width(), std::move(out));
}

}  // namespace topocp
