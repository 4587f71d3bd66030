#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsd {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  BadIndex,
  WrongDims,
  BadParams,
  NotEntangled,
  UnsupportedShape,
  ConstraintViolated,
  NoConvergence,
  InvalidDecomposition,
  NoApplicableCase,
  MixedEntangledPart,
  DimMismatch,
  EmptyGrid,
  ParseError,
  ValidationError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::WrongDims: return "WrongDims";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::NotEntangled: return "NotEntangled";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorKind::NoApplicableCase: return "NoApplicableCase";
    case ErrorKind::MixedEntangledPart: return "MixedEntangledPart";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace lsd
