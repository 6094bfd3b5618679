// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <cstdint>
#include <memory>
#include <vector>

#include "limabs/fields.hpp"
#include "limabs/materials.hpp"
#include "limabs/operators.hpp"

namespace limabs {

// Epsilon: field on edges, node potential grounded on Gamma1 and the outer box.
// Mu: field on faces, cell potential grounded on Gamma2 (natural on Gamma1).
enum class Flavor { Epsilon, Mu };

struct HelmholtzSplit {
  Flavor flavor = Flavor::Epsilon;
  CVec field;
  CVec potential;
  CVec gradient;    // G phi
  CVec remainder;   // field - G phi = gamma^-1 (solenoidal)
  CVec solenoidal;  // Lambda_gamma remainder / h^3, discretely divergence free
  double orthogonality = 0.0;  // |<G phi, remainder>_gamma| / ||field||_gamma^2
  double reassembly = 0.0;     // ||field - G phi - remainder|| / ||field||
  double divergence = 0.0;     // ||G^T Lambda remainder|| / ||G^T Lambda field||
  double rhs_norm = 0.0;        // ||G^T Lambda field||
  int cg_iterations = 0;
};

// gamma enters through ops: lambda_e for Epsilon, lambda_h for Mu.
// With rhs_scale > 0 the potential solve stops at tol * rhs_scale absolute
// instead of tol relative.
HelmholtzSplit helmholtz_decompose(const CVec& field, const BlockOperators& ops, Flavor flavor, double tol = 1e-11,
                                   double rhs_scale = 0.0);

// Splits both parts again; the largest drift of any part in the gamma norm,
// relative to ||field||_gamma.
double decomposition_idempotence(const HelmholtzSplit& split, const BlockOperators& ops, double tol = 1e-11);

// Cell-centred fields on the whole box; masked cells hold zeros.
using BoxField = CellPair;

BoxField box_zeros(const StaggeredGrid& grid);
BoxField box_extend(const DofMap& dofs, const FieldPair& u);
BoxField operator+(const BoxField& a, const BoxField& b);
BoxField operator-(const BoxField& a, const BoxField& b);
BoxField operator*(cplx s, const BoxField& a);

// Centred differences, zero outside the box. The Laplacian is the square of
// the centred difference, so Rot^2 = Delta - grad div holds exactly.
BoxField box_rot(const StaggeredGrid& grid, const BoxField& u);
BoxField box_laplacian(const StaggeredGrid& grid, const BoxField& u);
CellVectors box_divergence(const StaggeredGrid& grid, const BoxField& u);  // column 0: E, column 1: H

double box_norm(const StaggeredGrid& grid, const BoxField& u, double t = 0.0,
                const std::function<bool(const Vec3&)>& region = {});
cplx box_inner(const StaggeredGrid& grid, const BoxField& u, const BoxField& v);

struct WholeSpaceSplit {
  BoxField rot_free;  // f_R
  BoxField div_free;  // f_D
  double cross_inner = 0.0;      // |<f_R, f_D>| / ||f||^2 on the padded box
  double reassembly = 0.0;       // ||f - f_R - f_D|| / ||f||
  double curl_residual = 0.0;    // ||curl_h f_R|| / ||f|| (centred differences)
  double div_residual = 0.0;     // ||div_h f_D|| / ||f||
};

// Fourier projector on the box zero-padded to 2N per axis, built on the
// centred-difference symbol sin(k h) / h.
// The support must lie inside the ball of radius R_max.
WholeSpaceSplit whole_space_project(const StaggeredGrid& grid, const BoxField& f);

// F^-1 (1 + |k|^2)^-1 (1 - i |k| Xi_k) F f on the padded box, same symbol.
BoxField lemma_u2(const StaggeredGrid& grid, const BoxField& f2);

struct LemmaOptions {
  // eta = 1 for r <= r_in, 0 for r >= r_out; eta_check = 1 - eta. Zero picks
  // the cutoff family at the grid's r0.
  double r_in = 0.0, r_out = 0.0;
  // Cells dropped next to the box faces when measuring identity residuals.
  int margin = 3;
  std::function<bool(const Vec3&)> region;
};

struct LemmaDecomposition {
  cplx omega{0.0, 0.0};
  double h = 0.0;
  BoxField eta_u, u1, u2, u3, u_tilde;
  BoxField f1, f_rot, f_div, f2, f3;
  // Residuals of (Rot + i w Lambda0) eta_check u = f1, (Rot + i w Lambda0) u_tilde = f2 and
  // (Delta + w^2 eps0 mu0) u3 = (1 - i w tilde Lambda0) f2 - (1 + w^2 eps0 mu0) u2,
  // relative to the right-hand side norms.
  double residual1 = 0.0, residual2 = 0.0, residual3 = 0.0;
  double abs_residual1 = 0.0, abs_residual2 = 0.0, abs_residual3 = 0.0;
  double reassembly = 0.0;  // ||u - eta u - u1 - u2 - u3|| / ||u||
  double f1_norm = 0.0, f2_norm = 0.0;
};

LemmaDecomposition lemma41_decompose(const FieldPair& u, const FieldPair& f, cplx omega, const MaxwellOperator& op,
                                     const LemmaOptions& opts = {});

struct LemmaConstants {
  std::vector<double> c_f2;  // ||f2|| / ||f1||
  std::vector<double> c_f1;  // ||f1|| / (||f||_{L^2_s} + ||u||_{L^2_{s-kappa}})
  double max_over_median_f2 = 0.0, max_over_median_f1 = 0.0;
  bool bounded = false;  // both ratios <= 5
};

// Empirical constants of the estimate chain over random pairs (u, f) with
// f supported inside the ball of radius support.
LemmaConstants lemma41_constants(const MaxwellOperator& op, cplx omega, int samples, double s, double kappa,
                                 double support, std::uint64_t seed = 1, const LemmaOptions& opts = {});

struct DecayFit {
  std::vector<double> radii;
  std::vector<double> shell_rms;
  std::vector<double> t_values{-1.0, -0.5, 0.0, 0.5, 1.0};
  // weighted[i][j]: ||u||_{L^2_t} over the annulus between radii j and j+1 for t_values[i]
  std::vector<std::vector<double>> weighted;
  double slope = 0.0;
};

DecayFit decay_fit(const BoxField& u, const StaggeredGrid& grid, const std::vector<double>& shells);
DecayFit decay_fit(const FieldPair& u, const DofMap& dofs, const std::vector<double>& shells);

}  // namespace limabs
