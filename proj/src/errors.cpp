#include "iiclab/errors.hpp"

namespace iiclab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::BadShape: return "BadShape";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::NotUnique: return "NotUnique";
    case ErrorKind::SupportRankDeficient: return "SupportRankDeficient";
    case ErrorKind::DimensionBound: return "DimensionBound";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorKind::SupportNotFull: return "SupportNotFull";
    case ErrorKind::InfiniteVolume: return "InfiniteVolume";
    case ErrorKind::DimensionTooHigh: return "DimensionTooHigh";
    case ErrorKind::UnboundedBody: return "UnboundedBody";
    case ErrorKind::TiedMaximum: return "TiedMaximum";
    case ErrorKind::DegenerateCoordinates: return "DegenerateCoordinates";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::EmptyKernel: return "EmptyKernel";
    case ErrorKind::MinimumAtBoundary: return "MinimumAtBoundary";
    case ErrorKind::DegreeExhausted: return "DegreeExhausted";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::TargetMissing: return "TargetMissing";
    case ErrorKind::BadSize: return "BadSize";
    case ErrorKind::TooFew: return "TooFew";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::ConfigInvalid:
      return ErrorCategory::Usage;
    case ErrorKind::BadShape:
    case ErrorKind::NonFinite:
    case ErrorKind::FileNotFound:
    case ErrorKind::ParseError:
    case ErrorKind::TargetMissing:
    case ErrorKind::BadSize:
    case ErrorKind::TooFew:
    case ErrorKind::IoError:
    case ErrorKind::DegreeExhausted:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Numerical;
  }
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace iiclab
