#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pkirch {

enum class ErrorKind {
  OutOfRange,
  NonFinite,
  TailTooFat,
  StepFailure,
  BracketNotFound,
  NoInteriorExtremum,
  WrongRegime,
  GridUnderresolved,
  MassMismatch,
  NoRoot,
  ZeroFunction,
  RegimeError,
  DegeneratePair,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::TailTooFat: return "TailTooFat";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::BracketNotFound: return "BracketNotFound";
    case ErrorKind::NoInteriorExtremum: return "NoInteriorExtremum";
    case ErrorKind::WrongRegime: return "WrongRegime";
    case ErrorKind::GridUnderresolved: return "GridUnderresolved";
    case ErrorKind::MassMismatch: return "MassMismatch";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::ZeroFunction: return "ZeroFunction";
    case ErrorKind::RegimeError: return "RegimeError";
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace pkirch
