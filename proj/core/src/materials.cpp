// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "limabs/errors.hpp"

namespace limabs {

MaterialField::MaterialField(std::vector<Mat3> eps, std::vector<Mat3> mu, double eps0, double mu0,
                             double kappa)
    : eps_(std::move(eps)), mu_(std::move(mu)), eps0_(eps0), mu0_(mu0), kappa_(kappa) {
  if (eps_.size() != mu_.size()) throw Error(ErrorCode::DimensionMismatch, "eps and mu differ in size");
  if (!(eps0 > 0.0) || !(mu0 > 0.0))
    throw Error(ErrorCode::BadParameters, "eps0 and mu0 must be positive");
}

MaterialField MaterialField::vacuum(const StaggeredGrid& grid) {
  std::vector<Mat3> id(grid.n_cells(), Mat3::Identity());
  return {id, id, 1.0, 1.0, std::numeric_limits<double>::infinity()};
}

MaterialField MaterialField::inverse() const {
  std::vector<Mat3> e(eps_.size()), m(mu_.size());
  for (std::size_t c = 0; c < eps_.size(); ++c) {
    e[c] = eps_[c].inverse();
    m[c] = mu_[c].inverse();
  }
  return {std::move(e), std::move(m), 1.0 / eps0_, 1.0 / mu0_, kappa_};
}

namespace {

std::vector<Mat3> build_gamma(const GammaSpec& spec, const StaggeredGrid& grid) {
  if (!(spec.gamma0 > 0.0)) throw Error(ErrorCode::BadParameters, "gamma0 must be positive");
  std::vector<Mat3> out(grid.n_cells(), spec.gamma0 * Mat3::Identity());
  switch (spec.kind) {
    case GammaSpec::Kind::Vacuum:
      break;
    case GammaSpec::Kind::Radial:
      for (Id c = 0; c < grid.n_cells(); ++c) {
        const Vec3 x = grid.cell_center(c);
        const double r = x.norm();
        Mat3 shape = spec.matrix;
        if (spec.radial_projector) {
          const Vec3 xi = r > 0.0 ? Vec3(x / r) : Vec3::UnitZ();
          shape = xi * xi.transpose();
        }
        out[c] += spec.amplitude * std::pow(std::max(r, grid.r0()), -spec.kappa) * shape;
      }
      break;
    case GammaSpec::Kind::Tabulated:
      for (const auto& [cell, g] : spec.table) {
        if (cell < 0 || cell >= grid.n_cells())
          throw Error(ErrorCode::BadParameters, fmt::format("tabulated cell {} outside grid", cell));
        out[cell] = g;
      }
      break;
  }
  return out;
}

double declared_kappa(const GammaSpec& g) {
  switch (g.kind) {
    case GammaSpec::Kind::Vacuum: return std::numeric_limits<double>::infinity();
    case GammaSpec::Kind::Radial:
      return g.amplitude == 0.0 ? std::numeric_limits<double>::infinity() : g.kappa;
    case GammaSpec::Kind::Tabulated: return g.kappa;
  }
  return 0.0;
}

struct GammaStats {
  double c_pd = std::numeric_limits<double>::infinity();
  double c_max = 0.0;
  double sym = 0.0;
  double decay = 0.0;
  double slope = 0.0;
};

GammaStats gamma_stats(const std::vector<Mat3>& gamma, double gamma0, const StaggeredGrid& grid,
                       double kappa) {
  GammaStats s;
  const double h = grid.h();
  // shell index -> max of r^kappa ||gamma_hat||
  std::map<int, std::pair<double, double>> shells;
  bool any_hat = false;
  for (Id c = 0; c < grid.n_cells(); ++c) {
    if (grid.masked(c)) continue;
    const Mat3& g = gamma[c];
    s.sym = std::max(s.sym, (g - g.transpose()).norm());
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
    s.c_pd = std::min(s.c_pd, es.eigenvalues().minCoeff());
    s.c_max = std::max(s.c_max, es.eigenvalues().maxCoeff());

    const Vec3 x = grid.cell_center(c);
    const double r = x.norm();
    if (r < 2.0 * grid.r0()) continue;
    const Mat3 hat = g - gamma0 * Mat3::Identity();
    Eigen::SelfAdjointEigenSolver<Mat3> eh(0.5 * (hat + hat.transpose()), Eigen::EigenvaluesOnly);
    const double nrm = eh.eigenvalues().cwiseAbs().maxCoeff();
    if (nrm == 0.0) continue;
    any_hat = true;
    const double val = std::isfinite(kappa) ? std::pow(r, kappa) * nrm
                                            : std::numeric_limits<double>::infinity();
    s.decay = std::max(s.decay, val);
    if (r <= grid.r_max()) {
      const int bin = int(std::floor(r / h));
      auto& shell = shells[bin];
      shell.first = (bin + 0.5) * h;
      shell.second = std::max(shell.second, val);
    }
  }
  if (any_hat && std::isfinite(kappa) && shells.size() >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(shells.size());
    for (const auto& [k, v] : shells) {
      const double lx = std::log(v.first), ly = std::log(v.second);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return s;
}

}  // namespace

AdmissibilityReport validate_admissible(const MaterialField& mat, const StaggeredGrid& grid,
                                        double kappa_required, bool require_kappa_gt_one) {
  AdmissibilityReport rep;
  rep.kappa_required = kappa_required;
  const auto se = gamma_stats(mat.eps_cells(), mat.eps0(), grid, kappa_required);
  const auto sm = gamma_stats(mat.mu_cells(), mat.mu0(), grid, kappa_required);
  rep.c_pd = std::min(se.c_pd, sm.c_pd);
  rep.c_max = std::max(se.c_max, sm.c_max);
  rep.symmetry_residual = std::max(se.sym, sm.sym);
  rep.decay_constant = std::max(se.decay, sm.decay);
  rep.growth_slope = std::max(se.slope, sm.slope);

  rep.symmetric = rep.symmetry_residual == 0.0;
  rep.positive_definite = rep.c_pd >= kPositivityThreshold;
  rep.decays = std::isfinite(rep.decay_constant) && rep.growth_slope <= kGrowthSlopeLimit;
  if (!rep.symmetric)
    rep.failures.push_back(fmt::format("symmetry residual {:.3e}", rep.symmetry_residual));
  if (!rep.positive_definite)
    rep.failures.push_back(fmt::format("smallest eigenvalue {:.6g} below {:.0e}", rep.c_pd, kPositivityThreshold));
  if (!rep.decays)
    rep.failures.push_back(fmt::format("r^{} ||gamma_hat|| grows with log-log slope {:.3f}",
                                       kappa_required, rep.growth_slope));
  if (require_kappa_gt_one && !(kappa_required > 1.0))
    rep.failures.push_back(fmt::format("kappa = {} must exceed 1", kappa_required));
  rep.pass = rep.failures.empty();
  return rep;
}

MaterialField build_material(const MaterialSpec& spec, const StaggeredGrid& grid) {
  const double kappa = std::min(declared_kappa(spec.eps), declared_kappa(spec.mu));
  MaterialField mat(build_gamma(spec.eps, grid), build_gamma(spec.mu, grid), spec.eps.gamma0,
                    spec.mu.gamma0, kappa);
  const double k_check = std::isfinite(kappa) ? kappa : 0.0;
  const auto rep = validate_admissible(mat, grid, k_check);
  if (!rep.symmetric)
    throw Error(ErrorCode::NotSymmetric, fmt::format("material tensor asymmetry {:.3e}", rep.symmetry_residual));
  if (!rep.positive_definite)
    throw Error(ErrorCode::NotPositiveDefinite,
                fmt::format("smallest material eigenvalue {:.6g}", rep.c_pd));
  if (!rep.decays)
    throw Error(ErrorCode::DecayViolated,
                fmt::format("perturbation does not decay like r^-{} (slope {:.3f})", k_check, rep.growth_slope));
  for (const GammaSpec* g : {&spec.eps, &spec.mu}) {
    if (g->decay_bound && rep.decay_constant > *g->decay_bound) {
      throw Error(ErrorCode::DecayViolated, fmt::format("decay constant {:.6g} exceeds bound {:.6g}",
                                                        rep.decay_constant, *g->decay_bound));
    }
  }
  return mat;
}

bool AbsorberSpec::inside_physical(const Vec3& x, const StaggeredGrid& grid) const {
  if (!enabled()) return true;
  const double lim = 0.5 * grid.length() - cells * grid.h();
  return x.cwiseAbs().maxCoeff() <= lim + 1e-12;
}

namespace {

// Corner-combination mass matrix: per cell and per choice of one x, one y and
// one z item, add Q^T gamma Q; then scale so the diagonal is the mean of the
// adjacent unmasked cells, times h^3. Positive definite for SPD cell tensors.
template <class T, class TensorFn>
Eigen::SparseMatrix<T> assemble_mass(const DofMap& dm, Location loc, TensorFn&& tensor) {
  const auto& g = dm.grid();
  const bool edges = loc == Location::Edge;
  const Id n = edges ? dm.n_edges() : dm.n_faces();
  auto items = [&](int i, int j, int k, int a, int b, int c) -> std::array<int, 3> {
    if (edges) {
      return {dm.edge_index(g.edge_id(0, i, j + b, k + c)), dm.edge_index(g.edge_id(1, i + a, j, k + c)),
              dm.edge_index(g.edge_id(2, i + a, j + b, k))};
    }
    return {dm.face_index(g.face_id(0, i + a, j, k)), dm.face_index(g.face_id(1, i, j + b, k)),
            dm.face_index(g.face_id(2, i, j, k + c))};
  };

  std::vector<int> ncell(n, 0);
  std::vector<Eigen::Triplet<T>> trip;
  trip.reserve(std::size_t(dm.n_cells()) * 8 * 9);
  for (Id cell : dm.cells()) {
    auto [i, j, k] = g.decode_cell(cell);
    const Eigen::Matrix<T, 3, 3> gam = tensor(cell);
    std::array<int, 24> seen;
    int nseen = 0;
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a)
          for (int id : items(i, j, k, a, b, c))
            if (id >= 0) seen[nseen++] = id;
    std::sort(seen.begin(), seen.begin() + nseen);
    for (int s = 0; s < nseen; ++s)
      if (s == 0 || seen[s] != seen[s - 1]) ++ncell[seen[s]];
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a) {
          const auto q = items(i, j, k, a, b, c);
          for (int p = 0; p < 3; ++p) {
            if (q[p] < 0) continue;
            for (int r = 0; r < 3; ++r) {
              if (q[r] < 0 || gam(p, r) == T(0)) continue;
              trip.emplace_back(q[p], q[r], gam(p, r));
            }
          }
        }
  }
  Eigen::SparseMatrix<T> m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  const double combos = edges ? 2.0 : 4.0;
  const double h3 = g.h() * g.h() * g.h();
  Eigen::VectorXd d(n);
  for (Id e = 0; e < n; ++e) {
    if (ncell[e] == 0) throw Error(ErrorCode::InconsistentLabeling, "active dof without an unmasked cell");
    d[e] = std::sqrt(1.0 / (combos * ncell[e]));
  }
  for (int col = 0; col < m.outerSize(); ++col)
    for (typename Eigen::SparseMatrix<T>::InnerIterator it(m, col); it; ++it)
      it.valueRef() *= h3 * d[it.row()] * d[it.col()];
  m.prune([](Eigen::Index, Eigen::Index, const T& v) { return v != T(0); });
  return m;
}

bool is_diagonal(const SpMat& m) {
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it)
      if (it.row() != it.col()) return false;
  return true;
}

SpMat scaled_identity(Id n, double s) {
  SpMat m(n, n);
  m.setIdentity();
  return m * s;
}

}  // namespace

BlockOperators::BlockOperators(std::shared_ptr<const DofMap> dofs, const MaterialField& mat)
    : dofs_(std::move(dofs)), mat_(mat) {
  const auto& dm = *dofs_;
  if (Id(mat_.eps_cells().size()) != dm.grid().n_cells())
    throw Error(ErrorCode::DimensionMismatch, "material and grid differ in cell count");
  const double h3 = std::pow(dm.h(), 3);
  const double e0 = mat_.eps0(), m0 = mat_.mu0();
  hat_e_ = assemble_mass<double>(dm, Location::Edge,
                                 [&](Id c) { return Mat3(mat_.eps(c) - e0 * Mat3::Identity()); });
  hat_h_ = assemble_mass<double>(dm, Location::Face,
                                 [&](Id c) { return Mat3(mat_.mu(c) - m0 * Mat3::Identity()); });
  lam_e_ = scaled_identity(dm.n_edges(), e0 * h3) + hat_e_;
  lam_h_ = scaled_identity(dm.n_faces(), m0 * h3) + hat_h_;
  diag_e_ = is_diagonal(hat_e_);
  diag_h_ = is_diagonal(hat_h_);
  if (diag_e_) {
    inv_diag_e_ = lam_e_.diagonal().cwiseInverse();
  } else {
    chol_e_ = std::make_shared<Eigen::SimplicialLLT<SpMat>>(lam_e_);
    if (chol_e_->info() != Eigen::Success)
      throw Error(ErrorCode::NotPositiveDefinite, "edge mass matrix is not positive definite");
  }
  if (diag_h_) {
    inv_diag_h_ = lam_h_.diagonal().cwiseInverse();
  } else {
    chol_h_ = std::make_shared<Eigen::SimplicialLLT<SpMat>>(lam_h_);
    if (chol_h_->info() != Eigen::Success)
      throw Error(ErrorCode::NotPositiveDefinite, "face mass matrix is not positive definite");
  }
}

CVec BlockOperators::solve_e(const CVec& e) const {
  if (diag_e_) return inv_diag_e_.cwiseProduct(e);
  return CVec(chol_e_->solve(e.real())) + I_UNIT * CVec(chol_e_->solve(e.imag()));
}

CVec BlockOperators::solve_h(const CVec& h) const {
  if (diag_h_) return inv_diag_h_.cwiseProduct(h);
  return CVec(chol_h_->solve(h.real())) + I_UNIT * CVec(chol_h_->solve(h.imag()));
}

FieldPair BlockOperators::apply(const FieldPair& u) const { return {apply_e(u.E), apply_h(u.H)}; }
FieldPair BlockOperators::solve(const FieldPair& u) const { return {solve_e(u.E), solve_h(u.H)}; }
FieldPair BlockOperators::apply_hat(const FieldPair& u) const { return {hat_e_ * u.E, hat_h_ * u.H}; }

FieldPair BlockOperators::apply_lambda0(const FieldPair& u) const {
  const double h3 = std::pow(dofs_->h(), 3);
  return {mat_.eps0() * h3 * u.E, mat_.mu0() * h3 * u.H};
}

FieldPair BlockOperators::apply_tilde0(const FieldPair& u) const {
  const double h3 = std::pow(dofs_->h(), 3);
  return {mat_.mu0() * h3 * u.E, mat_.eps0() * h3 * u.H};
}

cplx BlockOperators::inner(const FieldPair& u, const FieldPair& v) const {
  const FieldPair lu = apply(u);
  return v.E.dot(lu.E) + v.H.dot(lu.H);  // Eigen's dot conjugates the left operand
}

cplx lambda_inner(const FieldPair& u, const FieldPair& v, const BlockOperators& ops) {
  return ops.inner(u, v);
}

namespace {

Eigen::Matrix3cd stretch_tensor(const Vec3& x, const AbsorberSpec& abs, const StaggeredGrid& g) {
  const double depth = abs.cells * g.h();
  const double start = 0.5 * g.length() - depth;
  cplx s[3];
  for (int d = 0; d < 3; ++d) {
    const double into = std::max(0.0, std::abs(x[d]) - start);
    const double sigma = abs.sigma_max * std::pow(std::min(1.0, into / depth), abs.order);
    s[d] = 1.0 + I_UNIT * sigma / abs.omega_ref;
  }
  Eigen::Matrix3cd t = Eigen::Matrix3cd::Zero();
  t(0, 0) = s[1] * s[2] / s[0];
  t(1, 1) = s[0] * s[2] / s[1];
  t(2, 2) = s[0] * s[1] / s[2];
  return t;
}

CSpMat absorbing(const DofMap& dm, const std::vector<Mat3>& gamma, const AbsorberSpec& abs,
                 Location loc) {
  const auto& g = dm.grid();
  return assemble_mass<cplx>(dm, loc, [&](Id c) -> Eigen::Matrix3cd {
    const Vec3 x = g.cell_center(c);
    const Mat3& gam = gamma[c];
    if (abs.inside_physical(x, g)) return gam.cast<cplx>();
    const double iso = gam(0, 0);
    if ((gam - iso * Mat3::Identity()).norm() != 0.0)
      throw Error(ErrorCode::BadParameters, "absorbing layer needs isotropic material in its cells");
    return iso * stretch_tensor(x, abs, g);
  });
}

}  // namespace

CSpMat BlockOperators::absorbing_e(const AbsorberSpec& abs) const {
  if (!abs.enabled()) return lam_e_.cast<cplx>();
  return absorbing(*dofs_, mat_.eps_cells(), abs, Location::Edge);
}

CSpMat BlockOperators::absorbing_h(const AbsorberSpec& abs) const {
  if (!abs.enabled()) return lam_h_.cast<cplx>();
  return absorbing(*dofs_, mat_.mu_cells(), abs, Location::Face);
}

}  // namespace limabs
