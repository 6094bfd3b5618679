// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "limabs/fields.hpp"
#include "limabs/grid.hpp"

namespace limabs {

// Recipe for one tensor field gamma = gamma0 I + gamma_hat.
struct GammaSpec {
  enum class Kind { Vacuum, Radial, Tabulated };

  Kind kind = Kind::Vacuum;
  double gamma0 = 1.0;
  // Radial: gamma_hat(x) = amplitude * max(r, r0)^(-kappa) * R(x).
  double amplitude = 0.0;
  double kappa = 0.0;
  Mat3 matrix = Mat3::Identity();
  bool radial_projector = false;  // R(x) = xi xi^T instead of matrix
  // Tabulated: full tensors for individual cells, gamma0 I elsewhere.
  std::vector<std::pair<Id, Mat3>> table;
  // Optional bound on the decay constant C.
  std::optional<double> decay_bound;
};

struct MaterialSpec {
  GammaSpec eps;
  GammaSpec mu;
};

class MaterialField {
 public:
  MaterialField() = default;
  MaterialField(std::vector<Mat3> eps, std::vector<Mat3> mu, double eps0, double mu0, double kappa);

  static MaterialField vacuum(const StaggeredGrid& grid);

  const Mat3& eps(Id cell) const { return eps_[cell]; }
  const Mat3& mu(Id cell) const { return mu_[cell]; }
  const std::vector<Mat3>& eps_cells() const { return eps_; }
  const std::vector<Mat3>& mu_cells() const { return mu_; }
  double eps0() const { return eps0_; }
  double mu0() const { return mu0_; }
  // Declared decay exponent; +inf when both perturbations vanish.
  double kappa() const { return kappa_; }

  // Pointwise inverses with gamma0 -> 1/gamma0.
  MaterialField inverse() const;

 private:
  std::vector<Mat3> eps_, mu_;
  double eps0_ = 1.0, mu0_ = 1.0, kappa_ = 0.0;
};

struct AdmissibilityReport {
  double c_pd = 0.0;               // smallest eigenvalue over unmasked cells
  double c_max = 0.0;              // largest eigenvalue
  double symmetry_residual = 0.0;  // max ||gamma - gamma^T||
  double decay_constant = 0.0;     // max_{r >= 2 r0} r^kappa ||gamma_hat||_2
  double growth_slope = 0.0;       // log-log slope of shell maxima of r^kappa ||gamma_hat||
  double kappa_required = 0.0;
  bool symmetric = true;
  bool positive_definite = true;
  bool decays = true;
  bool pass = true;
  std::vector<std::string> failures;
};

inline constexpr double kPositivityThreshold = 1e-8;
inline constexpr double kGrowthSlopeLimit = 0.05;

// Checks both eps and mu. With require_kappa_gt_one the pass flag also needs
// kappa_required > 1.
AdmissibilityReport validate_admissible(const MaterialField& mat, const StaggeredGrid& grid,
                                        double kappa_required, bool require_kappa_gt_one = false);

// Builds and validates; throws NotSymmetric, NotPositiveDefinite, DecayViolated.
MaterialField build_material(const MaterialSpec& spec, const StaggeredGrid& grid);

// Optional absorbing layer next to the outer box. Off when cells == 0.
struct AbsorberSpec {
  int cells = 0;
  double sigma_max = 0.0;
  double order = 2.0;
  double omega_ref = 1.0;

  bool enabled() const { return cells > 0 && sigma_max > 0.0; }
  // Physical region: more than `cells` cells away from every box face.
  bool inside_physical(const Vec3& x, const StaggeredGrid& grid) const;
};

// Lambda, its parts and inverses on the active dofs. Lambda carries the cell
// volume h^3, so <u, v>_Lambda = v^H Lambda u.
class BlockOperators {
 public:
  BlockOperators(std::shared_ptr<const DofMap> dofs, const MaterialField& mat);

  const DofMap& dofs() const { return *dofs_; }
  const MaterialField& material() const { return mat_; }
  double eps0() const { return mat_.eps0(); }
  double mu0() const { return mat_.mu0(); }

  const SpMat& lambda_e() const { return lam_e_; }
  const SpMat& lambda_h() const { return lam_h_; }
  const SpMat& hat_e() const { return hat_e_; }
  const SpMat& hat_h() const { return hat_h_; }
  bool diagonal() const { return diag_e_ && diag_h_; }

  CVec apply_e(const CVec& e) const { return lam_e_ * e; }
  CVec apply_h(const CVec& h) const { return lam_h_ * h; }
  CVec solve_e(const CVec& e) const;
  CVec solve_h(const CVec& h) const;

  FieldPair apply(const FieldPair& u) const;            // Lambda u
  FieldPair solve(const FieldPair& u) const;            // Lambda^-1 u
  FieldPair apply_hat(const FieldPair& u) const;        // Lambda_hat u
  FieldPair apply_lambda0(const FieldPair& u) const;    // (eps0 E, mu0 H) h^3
  FieldPair apply_tilde0(const FieldPair& u) const;     // (mu0 E, eps0 H) h^3

  // <u, v>_Lambda, linear in u.
  cplx inner(const FieldPair& u, const FieldPair& v) const;
  double norm(const FieldPair& u) const { return std::sqrt(std::max(0.0, inner(u, u).real())); }

  // Complex symmetric Lambda including the absorbing stretch.
  CSpMat absorbing_e(const AbsorberSpec& abs) const;
  CSpMat absorbing_h(const AbsorberSpec& abs) const;

 private:
  std::shared_ptr<const DofMap> dofs_;
  MaterialField mat_;
  SpMat lam_e_, lam_h_, hat_e_, hat_h_;
  bool diag_e_ = true, diag_h_ = true;
  RVec inv_diag_e_, inv_diag_h_;
  std::shared_ptr<Eigen::SimplicialLLT<SpMat>> chol_e_, chol_h_;
};

}  // namespace limabs

namespace limabs {

// <u, v>_Lambda = sum (eps E_u) . conj(E_v) h^3 + sum (mu H_u) . conj(H_v) h^3
cplx lambda_inner(const FieldPair& u, const FieldPair& v, const BlockOperators& ops);

}  // namespace limabs
