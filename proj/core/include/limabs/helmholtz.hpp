// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "limabs/grid.hpp"
#include "limabs/types.hpp"

namespace limabs {

// Complex values at every cell centre of the box (i fastest), whole-space
// problems only: the obstacle mask is ignored.
using ScalarField = CVec;

// beta^2 = nu^2 + i nu tau.
cplx helmholtz_beta2(double nu, double tau);

struct HelmholtzResolventSolve {
  cplx beta{0.0, 0.0};   // root of beta2 with Im beta >= 0
  cplx beta2{0.0, 0.0};
  ScalarField g;
  ScalarField w;              // cropped to the box
  double residual = 0.0;      // ||(Delta_h + beta^2) w - g|| / ||g|| on the padded box
  double min_denominator = 0.0;
  double w_norm_padded = 0.0;  // ||w|| over the padded box
  int pad = 2;
};

// (Delta_h + beta^2) w = g with the 7-point Laplacian on the box zero-padded
// to pad * N per axis and extended periodically.
HelmholtzResolventSolve solve_scalar_resolvent(cplx beta2, const ScalarField& g, const StaggeredGrid& grid,
                                               int pad = 2);

double scalar_norm(const StaggeredGrid& grid, const ScalarField& v, double t = 0.0);
// Only cells with |x|_inf < half_width.
double scalar_norm(const StaggeredGrid& grid, const ScalarField& v, double t, double half_width);

// Centred-difference gradient (zero outside the box), one column per axis.
CellVectors scalar_gradient(const StaggeredGrid& grid, const ScalarField& v);
ScalarField scalar_laplacian(const StaggeredGrid& grid, const ScalarField& v);

// ||w||_{H^2_t}: derivatives of order j weighted at t + j.
double h2_weighted_norm(const StaggeredGrid& grid, const ScalarField& w, double t);
double h2_weighted_norm(const StaggeredGrid& grid, const ScalarField& w, double t, double half_width);

struct H2Report {
  double lhs = 0.0;  // ||Delta w||^2 + ||w||^2
  double rhs = 0.0;  // 1/2 ||(1 + |k|^2) F w||^2
  double ratio = 0.0;
  bool holds = true;
};

// Both sides through the FFT of w zero-padded to pad * N, with the 7-point symbol for |k|^2.
H2Report h2_regularity_check(const ScalarField& w, const StaggeredGrid& grid, int pad = 2);

struct DecayRow {
  double tau = 0.0;
  std::vector<double> h2_norms;        // ||w||_{H^2_t} per t in the study grid
  std::vector<double> h2_norms_large;  // same on the enlarged box
  std::vector<bool> stable;            // relative change under enlargement <= 10%
  double largest_stable_t = 0.0;       // every t up to here is stable
  std::vector<double> l2_norms, l2_norms_large;
  std::vector<bool> l2_stable;
  double largest_stable_t_l2 = 0.0;
  double lemma_lhs = 0.0, lemma_rhs = 0.0, constant = 0.0;  // ||w||_{H^2_s} <= c (||g||_{s+1} + ||w||_{s-1})
};

struct DecayStudy {
  double nu = 0.0, s = 0.0;
  std::vector<double> t_grid{-1.5, -1.0, -0.75, -0.5, -0.25, 0.0, 0.5, 1.0};
  std::vector<DecayRow> rows;
};

// g is sampled at cell centres. One solve on the box with N doubled at fixed h;
// norms over the original box are compared against norms over the doubled one.
DecayStudy scalar_decay_study(double nu, const std::vector<double>& taus, const std::function<cplx(const Vec3&)>& g,
                              const StaggeredGrid& grid, double s, int pad = 4);

struct IkebeSaitoRow {
  double tau = 0.0;
  double w_t = 0.0;           // ||w||_t
  double we_h1 = 0.0;         // ||w_e||_{h^1_{s-2}}
  double grad_we = 0.0;       // ||grad w_e||_{s-1}
  double grad_w = 0.0;        // ||grad w||_{s-1}
  double g_s = 0.0;           // ||g||_s
  double w_delta = 0.0;       // ||w||_{-delta}
  double lhs = 0.0, rhs = 0.0, c = 0.0;
  double phase_ratio = 0.0;   // grad_we / grad_w
  double bound_ratio = 0.0;   // ||w|| |nu| tau / ||g|| on the padded box
};

struct IkebeSaitoReport {
  double nu = 0.0, s = 0.0, t = 0.0, delta = 1.0;
  std::vector<IkebeSaitoRow> rows;
  double c_max = 0.0, c_median = 0.0;
  bool uniform = true;  // c_max / c_median <= 3
};

// Padding 4 keeps the periodic images of weakly damped waves small.
IkebeSaitoRow ikebe_saito_check(double nu, double tau, const ScalarField& g, double s, double t,
                                const StaggeredGrid& grid, double delta = 1.0, int pad = 4);
IkebeSaitoReport ikebe_saito_sweep(double nu, const std::vector<double>& taus, const ScalarField& g, double s,
                                   double t, const StaggeredGrid& grid, double delta = 1.0, int pad = 4);

}  // namespace limabs
