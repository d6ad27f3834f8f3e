#include "zeroone/errors.hpp"

namespace zeroone {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::InvalidGenerator: return "InvalidGenerator";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::NotCompact: return "NotCompact";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::CompactClosure: return "CompactClosure";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotAxisAligned: return "NotAxisAligned";
    case ErrorCode::OverlapUnknown: return "OverlapUnknown";
    case ErrorCode::UnboundedRegion: return "UnboundedRegion";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::NonGaussian: return "NonGaussian";
    case ErrorCode::NotMeasurePreserving: return "NotMeasurePreserving";
    case ErrorCode::UnregisteredRegion: return "UnregisteredRegion";
    case ErrorCode::ApproximationTooCoarse: return "ApproximationTooCoarse";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace zeroone
