// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace limabs {

enum class ErrorCode {
  // configuration and geometry
  BadConfig,
  BadParameters,
  ObstacleTooLarge,
  DomainDisconnected,
  UnlabeledFace,
  InconsistentLabeling,
  DimensionMismatch,
  ShellOutsideDomain,
  InsufficientShells,
  SupportViolation,
  OmegaZero,
  // materials
  NotSymmetric,
  NotPositiveDefinite,
  DecayViolated,
  // solvers
  SingularAtRealFrequency,
  SolverStagnation,
  ConvergenceFailure,
  NotConverged,
  PoissonSolveFailure,
  ResonantDenominator,
  // oracles
  TruncationInsufficient,
  OracleFailure,
};

std::string_view error_name(ErrorCode code);

// True for errors raised while solving, as opposed to bad input.
bool is_solver_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace limabs
