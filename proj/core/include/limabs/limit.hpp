// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "limabs/fields.hpp"
#include "limabs/operators.hpp"
#include "limabs/oracles.hpp"
#include "limabs/resolvent.hpp"

namespace limabs {

// Root of omega^2 + i sigma omega in the upper half plane (lower when
// sigma < 0). sigma = 0 returns omega itself.
cplx schedule_frequency(double omega, double sigma);

struct FrequencySchedule {
  double omega = 1.0;
  double sigma0 = 0.5;
  double ratio = 0.5;
  int n_max = 8;
  // +1 approaches omega from the upper half plane, -1 from the lower one.
  int side = 1;
  std::vector<double> sigma;
  std::vector<cplx> omegas;
};

FrequencySchedule make_schedule(double omega, double sigma0, double ratio, int n_max, int side = 1);

struct TruncationChoice {
  double radius = 0.0;
  double bound = 0.0;  // exp(-Im w sqrt(eps0 mu0) (R - support))
  bool budget_bound = false;
};

TruncationChoice choose_truncation(cplx omega_n, const MaterialField& mat, double support_radius, double tol,
                                   double budget);

struct LimitOptions {
  double monitor_t = -1.0;
  SolverOptions solver;
  bool richardson = false;
  // Cells used for monitor norms; defaults to the absorber's physical region.
  std::function<bool(const Vec3&)> region;
  // Radius containing supp f, for the truncation report.
  double support_radius = 0.0;
  double truncation_tol = 1e-6;
  // Weight and shells for the per-iterate radiation residual.
  double radiation_t = -0.25;
  bool throw_if_not_converged = true;
};

struct LimitStep {
  double sigma = 0.0;
  cplx omega{0.0, 0.0};
  double rel_residual = 0.0;
  double u_lambda = 0.0;    // ||u_n||_Lambda
  double u_monitor = 0.0;   // ||u_n||_{L^2_t}
  double gap = 0.0;         // ||u_{n+1} - u_n||_{L^2_t}; 0 for the last step
  double radiation = 0.0;   // weighted norm of the outgoing radiation functional
  double max_kernel_inner = 0.0;  // max_i |<u_n, v_i>_Lambda| / ||u_n||_Lambda
  TruncationChoice truncation;
};

struct LimitRun {
  FrequencySchedule schedule;
  double monitor_t = -1.0;
  std::vector<FieldPair> iterates;
  std::vector<LimitStep> steps;
  std::vector<double> gap_ratios;
  double empirical_ratio = 0.0;   // mean of the last three gap ratios
  double empirical_order = 0.0;   // p with ratio^p = empirical_ratio
  bool converged = false;
  bool extrapolated = false;
  FieldPair limit;
  std::vector<cplx> kernel_inner;  // <u*, v_i>_Lambda
  FieldPair f;
};

LimitRun run_limit(std::shared_ptr<const MaxwellOperator> op, const FrequencySchedule& schedule,
                   const FieldPair& f, const LimitOptions& opts = {}, const KernelBasis* kernel = nullptr);

// L^2_t norm of both components over active dofs inside region.
double weighted_pair_norm(const FieldPair& u, const DofMap& dofs, double t,
                          const std::function<bool(const Vec3&)>& region = {});
// ||u||_{R_t}: L^2_t of u and of Rot u.
double r_weighted_norm(const MaxwellOperator& op, const FieldPair& u, double t,
                       const std::function<bool(const Vec3&)>& region = {});
// L^2_t norm of the outgoing radiation functional (Lambda0 + sqrt(eps0 mu0) Xi) u at cell centers.
double radiation_weighted_norm(const FieldPair& u, const DofMap& dofs, double eps0, double mu0, double t,
                               double sign = 1.0, const std::function<bool(const Vec3&)>& region = {});

struct AprioriRow {
  int n = 0;
  double sigma = 0.0;
  double lhs = 0.0, rhs = 0.0;
  double c = 0.0;  // NaN when both sides vanish
  bool defined = false;
  bool truncation_dominated = false;
};

struct AprioriReport {
  double s = 0.75, t = -1.0, that = -0.25, delta = 1.0;
  std::vector<AprioriRow> rows;
  double c_max = 0.0, c_median = 0.0;
  bool uniform = true;  // c_max / c_median <= 3
};

AprioriReport apriori_report(const LimitRun& run, const MaxwellOperator& op, double s = 0.75, double t = -1.0,
                             double that = -0.25, double delta = 1.0,
                             const std::function<bool(const Vec3&)>& region = {});

struct CertificateOptions {
  std::vector<double> t_grid{-1.0, -0.75, -0.5, -0.25, 0.0};
  std::vector<double> that_grid{-0.75, -0.5, -0.25};
  std::vector<double> shells;  // empty picks radii between the obstacle and the box
  std::function<bool(const Vec3&)> region;
  // Required drop of the outgoing residual slope below the field slope.
  double min_extra_decay = 0.5;
  // Relative change of the t = -1/4 functional norm between R/2 and R.
  double stability_tol = 0.25;
};

struct RadiatingCertificate {
  double equation_residual = 0.0;  // ||(M_h - omega) u - f||_Lambda; NaN for cell samples
  std::vector<double> t_grid, field_norms;
  std::vector<double> that_grid, outgoing_norms, incoming_norms;
  double field_slope = 0.0, outgoing_slope = 0.0, incoming_slope = 0.0;
  double outgoing_half = 0.0, outgoing_full = 0.0;  // t = -1/4 norms on r <= R/2 and r <= R
  double incoming_half = 0.0, incoming_full = 0.0;
  bool outgoing_stable = false;
  bool incoming_improved = false;
  bool pass = false;
  RadiationResidual shells;
};

RadiatingCertificate radiating_certificate(const FieldPair& u, const MaxwellOperator& op, double omega,
                                           const FieldPair& f, const CertificateOptions& opts = {});
// Same checks on cell-centred samples (no equation residual).
RadiatingCertificate radiating_certificate(const CellPair& u, const StaggeredGrid& grid, double eps0,
                                           double mu0, const CertificateOptions& opts = {});

// Plane-wave scattering by the obstacle as a source problem: with a smooth
// cutoff chi (1 for r <= r_in, 0 for r >= r_out) the field w = u_s + chi u_inc
// has homogeneous boundary data and solves (M_h - omega) w = f.
struct ScatteringSource {
  FieldPair f;
  FieldPair lift;  // chi u_inc on active dofs
};

ScatteringSource scattering_source(const MaxwellOperator& op, const FieldFn& incident, cplx omega, double r_in,
                                   double r_out);
double smooth_cutoff(double r, double r_in, double r_out);

}  // namespace limabs
