#pragma once

#include <stdexcept>
#include <string>

namespace thermistor {

enum class ErrorCode {
  InvalidArgument,
  InvalidR,
  DenominatorTooSmall,
  NonConvergence,
  StepFailure,
  OracleFailure,
  HypothesisViolated,
  InvalidExponent,
  EmptySet,
  ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API maps them onto thm_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double time, double residual)
      : Error(ErrorCode::StepFailure, what), time_(time), residual_(residual) {}

  double time() const noexcept { return time_; }
  double residual() const noexcept { return residual_; }

 private:
  double time_;
  double residual_;
};

}  // namespace thermistor
