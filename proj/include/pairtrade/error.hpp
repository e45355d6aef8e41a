#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairtrade {

enum class ErrorCode {
  // input / data
  MissingColumn,
  DuplicateDate,
  NonPositivePrice,
  EmptySeries,
  MalformedRow,
  FileNotFound,
  EmptyIntersection,
  DuplicateTicker,
  EmptyWindow,
  SeriesTooShort,
  LengthMismatch,
  EmptyFrame,
  EmptyList,
  Config,
  // numeric / degeneracy
  ZeroVariance,
  DegenerateRegressor,
  AllZeroResiduals,
  SampleTooSmall,
  ConstantSeries,
  UnknownSurface,
  PriceExceedsCapital,
  InvariantViolation,
};

inline constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::DuplicateTicker: return "DuplicateTicker";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyFrame: return "EmptyFrame";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::Config: return "Config";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateRegressor: return "DegenerateRegressor";
    case ErrorCode::AllZeroResiduals: return "AllZeroResiduals";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::UnknownSurface: return "UnknownSurface";
    case ErrorCode::PriceExceedsCapital: return "PriceExceedsCapital";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

/// True for failures caused by degenerate numerics rather than bad input.
inline constexpr bool is_numeric(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroVariance:
    case ErrorCode::DegenerateRegressor:
    case ErrorCode::AllZeroResiduals:
    case ErrorCode::SampleTooSmall:
    case ErrorCode::ConstantSeries:
    case ErrorCode::UnknownSurface:
    case ErrorCode::PriceExceedsCapital:
    case ErrorCode::InvariantViolation:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pairtrade
