#include "crn/error.hpp"

namespace crn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::RateArityError: return "RateArityError";
    case ErrorCode::NonpositiveRate: return "NonpositiveRate";
    case ErrorCode::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::DuplicateReaction: return "DuplicateReaction";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnusedSpecies: return "UnusedSpecies";
    case ErrorCode::OrphanComplex: return "OrphanComplex";
    case ErrorCode::UnknownReaction: return "UnknownReaction";
    case ErrorCode::UnknownSpecies: return "UnknownSpecies";
    case ErrorCode::NonIntegerCount: return "NonIntegerCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::CycleBudgetExceeded: return "CycleBudgetExceeded";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::NotWeaklyReversible: return "NotWeaklyReversible";
    case ErrorCode::NumericalRankFailure: return "NumericalRankFailure";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::BoxTooSmall: return "BoxTooSmall";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::PathExplosionGuard: return "PathExplosionGuard";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::RateArityError:
    case ErrorCode::NonpositiveRate:
    case ErrorCode::ZeroCoefficient:
    case ErrorCode::DuplicateReaction:
    case ErrorCode::SelfLoop:
    case ErrorCode::UnusedSpecies:
    case ErrorCode::OrphanComplex:
    case ErrorCode::UnknownReaction:
    case ErrorCode::UnknownSpecies:
    case ErrorCode::NonIntegerCount:
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyNetwork:
    case ErrorCode::BoxTooSmall:
    case ErrorCode::NotClosed:
      return true;
    default:
      return false;
  }
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     const std::optional<SourceSpan>& span) {
  std::string out(to_string(code));
  if (span) {
    out += " at " + std::to_string(span->line) + ":" + std::to_string(span->column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<SourceSpan> span)
    : std::runtime_error(decorate(code, message, span)), code_(code), span_(span) {}

}  // namespace crn
