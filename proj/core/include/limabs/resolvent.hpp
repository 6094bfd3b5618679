// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "limabs/fields.hpp"
#include "limabs/materials.hpp"
#include "limabs/operators.hpp"

namespace limabs {

struct SolverOptions {
  enum class Method { Auto, Direct, Iterative };

  Method method = Method::Auto;
  double tol = 1e-10;
  // Auto picks the direct solver up to this N.
  int direct_max_n = 32;
  int max_iterations = 400;
  int restart = 80;
  // Shift used to build the GMRES preconditioner; defaults to Re(omega) + i.
  std::optional<cplx> reference_shift;
  AbsorberSpec absorber;
};

struct ResolventSolve {
  cplx omega{0.0, 0.0};
  FieldPair f;
  FieldPair u;
  double rel_residual = 0.0;
  int iterations = 0;
  std::string method;  // "direct" or "iterative"
  double f_norm = 0.0;
  double u_norm = 0.0;
};

// Factorized (M_h - omega) on the Lambda-multiplied system with H = i H'.
// The factorization is immutable once built and may be shared between threads.
class ResolventSolver {
 public:
  ResolventSolver(std::shared_ptr<const MaxwellOperator> op, cplx omega, SolverOptions opts = {});
  ~ResolventSolver();
  ResolventSolver(const ResolventSolver&) = delete;
  ResolventSolver& operator=(const ResolventSolver&) = delete;

  cplx omega() const { return omega_; }
  const SolverOptions& options() const { return opts_; }
  const MaxwellOperator& op() const { return *op_; }
  bool reduced() const;

  ResolventSolve solve(const FieldPair& f) const;
  // Solve at conj(omega) reusing the same factorization; needs a real Lambda.
  ResolventSolve solve_conjugate(const FieldPair& f) const;
  bool has_conjugate() const { return !opts_.absorber.enabled(); }

  // ||(M_h - omega) u - f||_Lambda with the absorbing Lambda when enabled.
  double residual(const FieldPair& u, const FieldPair& f, cplx omega) const;

 private:
  struct Impl;
  std::shared_ptr<const MaxwellOperator> op_;
  cplx omega_;
  SolverOptions opts_;
  std::unique_ptr<Impl> impl_;
};

ResolventSolve solve_resolvent(std::shared_ptr<const MaxwellOperator> op, cplx omega,
                               const FieldPair& f, double tol = 1e-10, SolverOptions opts = {});

// (M_h - omega) u with the absorbing Lambda when enabled.
FieldPair apply_shifted(const MaxwellOperator& op, cplx omega, const FieldPair& u,
                        const AbsorberSpec& absorber = {});

struct ResolventProbe {
  cplx omega{0.0, 0.0};
  double norm_estimate = 0.0;  // Lambda-operator norm of the resolvent
  double bound = 0.0;          // 1 / |Im omega|
  double c_emp = 0.0;          // max ||u||_R |Im omega| / ((1 + |omega|) ||f||_Lambda)
  int iterations = 0;
};

// Power iteration on R^* R with R = (M_h - omega)^-1.
ResolventProbe resolvent_norm_probe(std::shared_ptr<const MaxwellOperator> op, cplx omega,
                                    int samples, std::uint64_t seed = 1, SolverOptions opts = {});

// ||u||_R^2 = ||u||^2 + ||Rot u||^2 with the h^3 cell volume.
double r_norm(const MaxwellOperator& op, const FieldPair& u);

struct EigenPair {
  double lambda = 0.0;
  double rq_imag = 0.0;      // Im of the complex Rayleigh quotient
  double residual = 0.0;     // ||(M_h - lambda) v||_Lambda
  double kernel_residual = 0.0;  // ||(M_h - omega0) v||_Lambda
  double localization = 0.0;     // outer / inner L2 norm
  bool truncation_artifact = false;
  FieldPair v;
};

struct KernelBasis {
  double omega = 0.0;
  std::vector<FieldPair> vectors;
  std::vector<double> residuals;
  // All converged pairs, including those left out of the basis.
  std::vector<EigenPair> pairs;
  double kernel_tol = 0.0;
  bool empty() const { return vectors.empty(); }
};

struct EigenOptions {
  double tol = 1e-8;          // relative residual for Ritz pairs
  double kernel_tol = 1e-6;   // basis admits ||(M_h - omega0) v||_Lambda below this
  double localization_limit = 0.2;
  int block = 0;              // 0 picks max(k, 4)
  int krylov_steps = 8;
  int max_restarts = 30;
  std::uint64_t seed = 7;
};

// Shift-invert block Krylov on the real pencil S x = lambda B x; excludes the
// static kernel. Pairs sorted by |lambda - omega0|.
KernelBasis eigensolve_near(std::shared_ptr<const MaxwellOperator> op, double omega0, int k,
                            const EigenOptions& opts = {});

// f - sum <f, v_i>_Lambda v_i
FieldPair project_out_kernel(const FieldPair& f, const KernelBasis& basis, const BlockOperators& ops);

}  // namespace limabs
