#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iiclab {

enum class ErrorKind {
  // design / linear algebra
  RankDeficient,
  BadShape,
  NonFinite,
  NotPositiveDefinite,
  // solvers
  MaxIterations,
  NotUnique,
  SupportRankDeficient,
  // criterion
  DimensionBound,
  ZeroNorm,
  ZeroCoordinate,
  SupportNotFull,
  InfiniteVolume,
  DimensionTooHigh,
  UnboundedBody,
  TiedMaximum,
  DegenerateCoordinates,
  // oracle
  BudgetExhausted,
  EmptyKernel,
  MinimumAtBoundary,
  // features
  DegreeExhausted,
  // experiment plumbing
  FileNotFound,
  ParseError,
  TargetMissing,
  BadSize,
  TooFew,
  ZeroVariance,
  IoError,
  ConfigInvalid,
  Usage,
};

/// Coarse classification used for CLI exit codes.
enum class ErrorCategory { Usage = 2, Data = 3, Numerical = 4 };

std::string_view to_string(ErrorKind kind) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

}  // namespace iiclab
