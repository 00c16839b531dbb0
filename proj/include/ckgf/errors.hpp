#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ckgf {

/// Failure categories raised by the toolkit.
enum class ErrorCode {
  NotPositive,
  NotHermitian,
  ZeroDenominator,
  DimensionMismatch,
  InvalidInterval,
  InvalidWeight,
  NonRealFunctional,
  NonHermitianFrameOperator,
  NotPositiveSemidefinite,
  NonPositiveBlock,
  NotInvertible,
  CommutationViolated,
  ZeroOperator,
  RangeNotContained,
  MeasureMismatch,
  HypothesisViolated,
  EquivalenceViolation,
  NotAFrame,
  InvalidSpec,
  CertificateFailure,
  InputError,
};

std::string_view to_string(ErrorCode code);

/// True for codes that describe malformed input rather than a violated
/// mathematical precondition.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ckgf
