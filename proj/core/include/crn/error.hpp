#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crn {

enum class ErrorCode {
  // input / structural
  SyntaxError,
  RateArityError,
  NonpositiveRate,
  ZeroCoefficient,
  DuplicateReaction,
  SelfLoop,
  UnusedSpecies,
  OrphanComplex,
  UnknownReaction,
  UnknownSpecies,
  NonIntegerCount,
  InvalidArgument,
  EmptyNetwork,
  // analysis
  CycleBudgetExceeded,
  NotReversible,
  NotWeaklyReversible,
  NumericalRankFailure,
  NonFiniteState,
  BoxTooSmall,
  NotClosed,
  SolveFailure,
  EmptySupport,
  NotNormalized,
  PathExplosionGuard,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by malformed user input rather than by numerics.
bool is_input_error(ErrorCode code) noexcept;

/// 1-based position inside a parsed text.
struct SourceSpan {
  int line = 1;
  int column = 1;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourceSpan> span = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourceSpan>& span() const noexcept { return span_; }

 private:
  ErrorCode code_;
  std::optional<SourceSpan> span_;
};

}  // namespace crn
