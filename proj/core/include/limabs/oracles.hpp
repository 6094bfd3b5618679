// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "limabs/fields.hpp"
#include "limabs/grid.hpp"
#include "limabs/operators.hpp"

namespace limabs {

using CVec3 = Eigen::Vector3cd;

struct PointField {
  CVec3 E = CVec3::Zero();
  CVec3 H = CVec3::Zero();
};

using FieldFn = std::function<PointField(const Vec3&)>;

// E tangential at edge midpoints, H normal at face centers.
FieldPair sample_dofs(const DofMap& dofs, const FieldFn& fn);
// Full vectors at every cell center of the box (masked cells included).
CellPair sample_cells(const StaggeredGrid& grid, const FieldFn& fn);

// Spherical Bessel j_n and Hankel h_n^(1) for n = 0..nmax at complex z != 0.
std::vector<cplx> spherical_jn(int nmax, cplx z);
std::vector<cplx> spherical_hn(int nmax, cplx z);

struct PlaneWaveSpec {
  Vec3 direction = Vec3::UnitZ();
  Vec3 polarization = Vec3::UnitX();
  cplx amplitude{1.0, 0.0};
};

// E = p e^{i k d.x}, H = -(k d x E) / (omega mu0); solves the source-free
// system curl E = -i omega mu H, curl H = i omega eps E.
PointField plane_wave(const PlaneWaveSpec& pw, cplx omega, double eps0, double mu0, const Vec3& x);

// Scattering of a plane wave by a perfectly conducting sphere centred at the
// origin. Complex omega is allowed; the scattered part behaves like e^{ikr}.
class MieSolution {
 public:
  MieSolution(cplx omega, double radius, PlaneWaveSpec incident, double eps0 = 1.0, double mu0 = 1.0,
              int max_order = 40);

  cplx omega() const { return omega_; }
  cplx wavenumber() const { return k_; }
  double radius() const { return a_; }
  int order() const { return int(an_.size()); }
  const std::vector<cplx>& a() const { return an_; }
  const std::vector<cplx>& b() const { return bn_; }
  double tail() const;

  PointField incident(const Vec3& x) const;
  PointField scattered(const Vec3& x) const;
  PointField total(const Vec3& x) const;

  // Cross sections for real wavenumbers.
  double scattering_cross_section() const;
  double extinction_cross_section() const;

 private:
  cplx omega_, k_;
  double a_, eps0_, mu0_;
  PlaneWaveSpec inc_;
  Mat3 rot_;  // columns: polarization, direction x polarization, direction
  std::vector<cplx> an_, bn_;
};

enum class MiePart { Incident, Scattered, Total };

FieldPair mie_pec_sphere(const MieSolution& mie, const DofMap& dofs, MiePart part = MiePart::Scattered);

struct DipoleSpec {
  Vec3 position = Vec3::Zero();
  CVec3 moment = CVec3(0.0, 0.0, 1.0);
  cplx omega{1.0, 0.0};
  double eps0 = 1.0;
  double mu0 = 1.0;
  bool outgoing = true;
};

// Electric dipole with e^{+ikr} (outgoing) or e^{-ikr} (incoming) kernels.
PointField dipole(const DipoleSpec& d, const Vec3& x);
FieldPair dipole_field(const DipoleSpec& d, const DofMap& dofs);

// x / r^2 tangential at active edge midpoints.
CVec grad_ln_r_field(const DofMap& dofs);
// Line integrals of x / r^2 along active edges divided by h (exactly curl free).
CVec grad_ln_r_integrated(const DofMap& dofs);

// Solution of (Delta + k^2) w = g for a radial source g(|x|) supported in
// r <= support, evaluated at distance d from its centre: w = -G * g with
// G = e^{ikr} / (4 pi r). k = i gives the screened-Poisson (Yukawa) kernel;
// Im k > 0 keeps the outgoing one decaying.
cplx radial_green_convolution(cplx k, const std::function<double(double)>& g, double support, double d);

struct DenseOracleReport {
  int n_small = 0;
  Id n_edges = 0, n_faces = 0;
  double antisymmetry = 0.0;         // ||Rot + Rot^T||
  double sigma_min_a = 0.0;          // smallest nonzero singular value of C
  double sigma_min_a_adj = 0.0;      // same for C^T
  double c_a = 0.0, c_a_adj = 0.0;   // 1 / sigma_min
  double inverse_norm = 0.0;         // ||A_reduced^-1|| from the pseudo-inverse
  Id kernel_dim = 0;                 // dim ker C
  Id gradient_dim = 0;               // rank of the gradient on active nodes
  double orthogonality = 0.0;        // max |<range(C^T), ker(C)>|
  double completeness = 0.0;         // ||P_range + P_ker - I||
  double resolvent_norm_svd = 0.0;   // ||(M - i)^-1|| from the dense matrix
  double resolvent_norm_formula = 0.0;  // 1 / sqrt(1 + lambda_min^2)
  double resolvent_norm_probe = 0.0;    // power iteration
  bool pass = false;
};

// Dense checks on a vacuum PEC box with N = n_small (2..6).
DenseOracleReport dense_mini_oracle(int n_small, std::uint64_t seed = 1);

}  // namespace limabs
