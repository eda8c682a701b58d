#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topocp {

enum class ErrorCode {
  MalformedHeader,
  TruncatedPayload,
  OutOfRange,
  ShapeMismatch,
  EmptyMask,
  LengthMismatch,
  InfeasibleSpec,
  ImageTooSmall,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace topocp
