#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zeroone {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteInput,
  DimensionMismatch,
  ConvergenceFailure,
  IllConditioned,
  InvalidGenerator,
  GroupTooLarge,
  NotCompact,
  NotSPD,
  CompactClosure,
  SingularMatrix,
  NotAxisAligned,
  OverlapUnknown,
  UnboundedRegion,
  UnsupportedKind,
  NonGaussian,
  NotMeasurePreserving,
  UnregisteredRegion,
  ApproximationTooCoarse,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zeroone
