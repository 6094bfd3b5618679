// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/errors.hpp"

namespace limabs {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::ObstacleTooLarge: return "ObstacleTooLarge";
    case ErrorCode::DomainDisconnected: return "DomainDisconnected";
    case ErrorCode::UnlabeledFace: return "UnlabeledFace";
    case ErrorCode::InconsistentLabeling: return "InconsistentLabeling";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShellOutsideDomain: return "ShellOutsideDomain";
    case ErrorCode::InsufficientShells: return "InsufficientShells";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::OmegaZero: return "OmegaZero";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DecayViolated: return "DecayViolated";
    case ErrorCode::SingularAtRealFrequency: return "SingularAtRealFrequency";
    case ErrorCode::SolverStagnation: return "SolverStagnation";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::PoissonSolveFailure: return "PoissonSolveFailure";
    case ErrorCode::ResonantDenominator: return "ResonantDenominator";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::OracleFailure: return "OracleFailure";
  }
  return "Unknown";
}

bool is_solver_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularAtRealFrequency:
    case ErrorCode::SolverStagnation:
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NotConverged:
    case ErrorCode::PoissonSolveFailure:
    case ErrorCode::ResonantDenominator:
    case ErrorCode::TruncationInsufficient:
    case ErrorCode::OracleFailure:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

}  // namespace limabs
