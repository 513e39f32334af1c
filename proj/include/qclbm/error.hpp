#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qclbm {

// Stable identifiers; the CLI writes these into its error records.
enum class ErrorCode {
  InvalidArgument,
  DegenerateDensity,
  UnstableRelaxation,
  UnphysicalAmplitude,
  UndefinedRatio,
  DimensionCap,
  InsufficientClockResolution,
  InsufficientClockQubits,
  RotationUndefined,
  PostSelectionImpossible,
  MismatchedBinning,
  NumericalFailure,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qclbm
