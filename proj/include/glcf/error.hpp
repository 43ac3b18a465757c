#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glcf {

/// Domain error codes. The CLI prints the name of the code on exit status 1.
enum class Errc {
  FieldMismatch,
  DivisionByZero,
  NoInverses,
  InvalidField,
  NotNormalizable,
  NotInGlFr,
  EqualDiagonalEntries,
  NotDiagonal,
  ZeroPivot,
  NotInSlFr,
  UnsupportedTail,
  FiniteDisagreement,
  NotInfinite,
  GapPropertyViolated,
  NotADerivation,
  SparsityViolated,
  ProbeInsufficient,
  ProbeExceeded,
  NotTransportable,
  ParseError,
  SchemaError,
  InvalidArgument,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NoInverses: return "NoInverses";
    case Errc::InvalidField: return "InvalidField";
    case Errc::NotNormalizable: return "NotNormalizable";
    case Errc::NotInGlFr: return "NotInGlFr";
    case Errc::EqualDiagonalEntries: return "EqualDiagonalEntries";
    case Errc::NotDiagonal: return "NotDiagonal";
    case Errc::ZeroPivot: return "ZeroPivot";
    case Errc::NotInSlFr: return "NotInSlFr";
    case Errc::UnsupportedTail: return "UnsupportedTail";
    case Errc::FiniteDisagreement: return "FiniteDisagreement";
    case Errc::NotInfinite: return "NotInfinite";
    case Errc::GapPropertyViolated: return "GapPropertyViolated";
    case Errc::NotADerivation: return "NotADerivation";
    case Errc::SparsityViolated: return "SparsityViolated";
    case Errc::ProbeInsufficient: return "ProbeInsufficient";
    case Errc::ProbeExceeded: return "ProbeExceeded";
    case Errc::NotTransportable: return "NotTransportable";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace glcf
