#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhmix {

enum class ErrorCode {
  ZeroDensity,
  NegativeDensity,
  NegativeDiscriminant,
  NonpositivePressure,
  NonpositiveTemperature,
  PoleAtP,
  InvalidPrimitive,
  InvalidParameter,
  LengthMismatch,
  ZeroAveragedDensity,
  StateBlowup,
  AdmissibilityLost,
  UnknownCase,
  NonNestedMesh,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the time integrator; carries where and when the state broke.
class SolverError : public Error {
 public:
  SolverError(ErrorCode code, const std::string& what, int node, double time,
              ErrorCode cause)
      : Error(code, what), node_(node), time_(time), cause_(cause) {}

  int node() const noexcept { return node_; }
  double time() const noexcept { return time_; }
  // The closure failure underlying an AdmissibilityLost, or the code itself.
  ErrorCode cause() const noexcept { return cause_; }

 private:
  int node_;
  double time_;
  ErrorCode cause_;
};

}  // namespace qhmix
