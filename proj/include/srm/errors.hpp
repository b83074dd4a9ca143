#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srm {

// Every failure the library reports carries one of these kinds. The CLI maps
// kinds onto exit codes and prints the kind name as the first token on stderr.
enum class ErrorKind {
  NonAtomicInput,
  DuplicateLocation,
  InvalidArgument,
  QuadratureFailure,
  SupportViolation,
  TruncationTooCoarse,
  NotPSD,
  AssumptionViolated,
  UnmatchedLikelihood,
  InvalidAlpha,
  InsufficientWindows,
  DegenerateScan,
  BlockMismatch,
  SpecValidation,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAtomicInput: return "NonAtomicInput";
    case ErrorKind::DuplicateLocation: return "DuplicateLocation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::TruncationTooCoarse: return "TruncationTooCoarse";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::UnmatchedLikelihood: return "UnmatchedLikelihood";
    case ErrorKind::InvalidAlpha: return "InvalidAlpha";
    case ErrorKind::InsufficientWindows: return "InsufficientWindows";
    case ErrorKind::DegenerateScan: return "DegenerateScan";
    case ErrorKind::BlockMismatch: return "BlockMismatch";
    case ErrorKind::SpecValidation: return "SpecValidation";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace srm
