#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chemostab {

enum class ErrorKind {
  NonPositiveCoefficient,
  MIsBelowOne,
  MixedLogistic,
  MissingFreeParameter,
  NonPositiveInitialData,
  InvalidDomain,
  SingularOperator,
  NonFiniteInput,
  SolverFailure,
  DegenerateState,
  BlowupDetected,
  UnstableTimeStep,
  SpectrumTooShort,
  EigsolverFailure,
  HypothesisViolated,
  BetaBelowOne,
  MissingCZConstant,
  MissingKStar,
  GammaNotOne,
  MinimalModelUnsupported,
  OrderViolation,
  TimeGridMismatch,
  NonPositiveDensity,
  WindowEmpty,
  HypothesisNotMet,
  GridTooLarge,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chemostab
