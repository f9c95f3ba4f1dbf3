#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bsl {

enum class ErrorKind {
  NotDivisible,
  NotInvertible,
  BaseMismatch,
  InvalidGenerator,
  NotElliptic,
  DoesNotFix,
  NotCommuting,
  AxisMismatch,
  HeightMismatch,
  InvalidParams,
  ValidationFailed,
  NotStraightenable,
  CaseInvalid,
  TooLarge,
  NotMember,
  ZeroTranslation,
  ParseError,
  Internal,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::InvalidGenerator: return "InvalidGenerator";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::DoesNotFix: return "DoesNotFix";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::AxisMismatch: return "AxisMismatch";
    case ErrorKind::HeightMismatch: return "HeightMismatch";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::NotStraightenable: return "NotStraightenable";
    case ErrorKind::CaseInvalid: return "CaseInvalid";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::ZeroTranslation: return "ZeroTranslation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so that front ends can
/// map it onto an exit status without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace bsl
