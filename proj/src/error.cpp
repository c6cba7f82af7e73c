#include "chemostab/error.hpp"

namespace chemostab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorKind::MIsBelowOne: return "MIsBelowOne";
    case ErrorKind::MixedLogistic: return "MixedLogistic";
    case ErrorKind::MissingFreeParameter: return "MissingFreeParameter";
    case ErrorKind::NonPositiveInitialData: return "NonPositiveInitialData";
    case ErrorKind::InvalidDomain: return "InvalidDomain";
    case ErrorKind::SingularOperator: return "SingularOperator";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::BlowupDetected: return "BlowupDetected";
    case ErrorKind::UnstableTimeStep: return "UnstableTimeStep";
    case ErrorKind::SpectrumTooShort: return "SpectrumTooShort";
    case ErrorKind::EigsolverFailure: return "EigsolverFailure";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::BetaBelowOne: return "BetaBelowOne";
    case ErrorKind::MissingCZConstant: return "MissingCZConstant";
    case ErrorKind::MissingKStar: return "MissingKStar";
    case ErrorKind::GammaNotOne: return "GammaNotOne";
    case ErrorKind::MinimalModelUnsupported: return "MinimalModelUnsupported";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::TimeGridMismatch: return "TimeGridMismatch";
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::WindowEmpty: return "WindowEmpty";
    case ErrorKind::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace chemostab
