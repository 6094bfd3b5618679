// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/IterativeLinearSolvers>
#include <fmt/format.h>

#include "fft_box.hpp"
#include "limabs/errors.hpp"
#include "limabs/limit.hpp"
#include "limabs/numerics.hpp"

namespace limabs {

HelmholtzSplit helmholtz_decompose(const CVec& field, const BlockOperators& ops, Flavor flavor, double tol,
                                   double rhs_scale) {
  const DofMap& dm = ops.dofs();
  const SpMat g = flavor == Flavor::Epsilon ? assemble_gradient(dm) : assemble_dual_gradient(dm);
  const SpMat& lam = flavor == Flavor::Epsilon ? ops.lambda_e() : ops.lambda_h();
  if (field.size() != g.rows())
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("field has {} entries, the {} flavor expects {}", field.size(),
                            flavor == Flavor::Epsilon ? "epsilon" : "mu", g.rows()));
  if (!field.allFinite()) throw Error(ErrorCode::BadParameters, "field not finite");

  HelmholtzSplit s;
  s.flavor = flavor;
  s.field = field;
  const SpMat gt = g.transpose();
  const SpMat a = gt * lam * g;
  const CVec lf = lam * field;
  const CVec b = gt * lf;
  s.potential = CVec::Zero(g.cols());
  s.rhs_norm = b.norm();
  // b at round-off level of its own summands, or below tol * rhs_scale: already solenoidal
  const double b_floor = std::max(1e-13 * (gt.cwiseAbs() * lf.cwiseAbs()).norm(), tol * rhs_scale);
  if (b.norm() > b_floor) {
    if (rhs_scale > 0.0) tol = std::min(0.5, tol * rhs_scale / b.norm());
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * a.rows()));
    cg.compute(a);
    const RVec re = cg.solve(RVec(b.real()));
    int it = int(cg.iterations());
    const double err_re = cg.error();
    const RVec im = cg.solve(RVec(b.imag()));
    it += int(cg.iterations());
    const double err = std::max(err_re, cg.error());
    if (!(err <= 10.0 * tol))
      throw Error(ErrorCode::PoissonSolveFailure,
                  fmt::format("potential solve stopped at relative residual {:.3e} after {} iterations", err, it));
    s.potential.real() = re;
    s.potential.imag() = im;
    s.cg_iterations = it;
  }
  s.gradient = g * s.potential;
  s.remainder = field - s.gradient;
  const double h3 = std::pow(dm.h(), 3);
  s.solenoidal = lam * s.remainder / h3;

  const double fn2 = std::real(field.dot(lf));
  s.orthogonality = fn2 > 0.0 ? std::abs(s.gradient.dot(lam * s.remainder)) / fn2 : 0.0;
  const double fn = field.norm();
  s.reassembly = fn > 0.0 ? (field - s.gradient - s.remainder).norm() / fn : 0.0;
  s.divergence = b.norm() > 0.0 ? (gt * (lam * s.remainder)).norm() / b.norm() : 0.0;
  return s;
}

double decomposition_idempotence(const HelmholtzSplit& s, const BlockOperators& ops, double tol) {
  const SpMat& lam = s.flavor == Flavor::Epsilon ? ops.lambda_e() : ops.lambda_h();
  const double fn2 = std::real(s.field.dot(lam * s.field));
  if (!(fn2 > 0.0)) return 0.0;
  auto lnorm = [&](const CVec& v) { return std::sqrt(std::max(0.0, std::real(v.dot(lam * v)))); };
  const auto g = helmholtz_decompose(s.gradient, ops, s.flavor, tol, s.rhs_norm);
  const auto r = helmholtz_decompose(s.remainder, ops, s.flavor, tol, s.rhs_norm);
  const double fn = std::sqrt(fn2);
  return std::max({lnorm(g.gradient - s.gradient) / fn, lnorm(g.remainder) / fn, lnorm(r.gradient) / fn,
                   lnorm(r.remainder - s.remainder) / fn});
}

BoxField box_zeros(const StaggeredGrid& g) {
  return {CellVectors::Zero(g.n_cells(), 3), CellVectors::Zero(g.n_cells(), 3)};
}

BoxField box_extend(const DofMap& dofs, const FieldPair& u) { return colocate(dofs, u); }

BoxField operator+(const BoxField& a, const BoxField& b) { return {a.E + b.E, a.H + b.H}; }
BoxField operator-(const BoxField& a, const BoxField& b) { return {a.E - b.E, a.H - b.H}; }
BoxField operator*(cplx s, const BoxField& a) { return {s * a.E, s * a.H}; }

namespace {

// Centred derivative along axis d of one component.
cplx dcentral(const StaggeredGrid& g, const CellVectors& v, int col, int d, int i, int j, int k) {
  const int n = g.n();
  std::array<int, 3> p{i, j, k}, q{i, j, k};
  ++p[d];
  --q[d];
  const cplx hi = p[d] < n ? v(g.cell_id(p[0], p[1], p[2]), col) : cplx(0.0);
  const cplx lo = q[d] >= 0 ? v(g.cell_id(q[0], q[1], q[2]), col) : cplx(0.0);
  return (hi - lo) / (2.0 * g.h());
}

CellVectors curl_c(const StaggeredGrid& g, const CellVectors& v) {
  CellVectors out(v.rows(), 3);
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Id c = g.cell_id(i, j, k);
        out(c, 0) = dcentral(g, v, 2, 1, i, j, k) - dcentral(g, v, 1, 2, i, j, k);
        out(c, 1) = dcentral(g, v, 0, 2, i, j, k) - dcentral(g, v, 2, 0, i, j, k);
        out(c, 2) = dcentral(g, v, 1, 0, i, j, k) - dcentral(g, v, 0, 1, i, j, k);
      }
  return out;
}

CVec div_c(const StaggeredGrid& g, const CellVectors& v) {
  CVec out(v.rows());
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        out[g.cell_id(i, j, k)] =
            dcentral(g, v, 0, 0, i, j, k) + dcentral(g, v, 1, 1, i, j, k) + dcentral(g, v, 2, 2, i, j, k);
  return out;
}

// Square of the centred difference: stride 2, spacing 2h.
CellVectors laplace_c(const StaggeredGrid& g, const CellVectors& v) {
  CellVectors out(v.rows(), 3);
  const int n = g.n();
  const double s = 1.0 / (4.0 * g.h() * g.h());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Id c = g.cell_id(i, j, k);
        for (int col = 0; col < 3; ++col) {
          cplx acc = -6.0 * v(c, col);
          for (int d = 0; d < 3; ++d) {
            std::array<int, 3> p{i, j, k};
            for (int o : {-2, 2}) {
              p[d] += o;
              if (p[d] >= 0 && p[d] < n) acc += v(g.cell_id(p[0], p[1], p[2]), col);
              p[d] -= o;
            }
          }
          out(c, col) = s * acc;
        }
      }
  return out;
}

double sq(const CellVectors& v, Id c) { return v.row(c).squaredNorm(); }

}  // namespace

BoxField box_rot(const StaggeredGrid& g, const BoxField& u) { return {-curl_c(g, u.H), curl_c(g, u.E)}; }

BoxField box_laplacian(const StaggeredGrid& g, const BoxField& u) { return {laplace_c(g, u.E), laplace_c(g, u.H)}; }

CellVectors box_divergence(const StaggeredGrid& g, const BoxField& u) {
  CellVectors out = CellVectors::Zero(u.E.rows(), 3);
  out.col(0) = div_c(g, u.E);
  out.col(1) = div_c(g, u.H);
  return out;
}

double box_norm(const StaggeredGrid& g, const BoxField& u, double t, const std::function<bool(const Vec3&)>& region) {
  double s = 0.0;
  for (Id c = 0; c < g.n_cells(); ++c) {
    const Vec3 x = g.cell_center(c);
    if (region && !region(x)) continue;
    const double w = t == 0.0 ? 1.0 : std::pow(1.0 + x.squaredNorm(), t);
    s += w * (sq(u.E, c) + sq(u.H, c));
  }
  return std::sqrt(s * std::pow(g.h(), 3));
}

cplx box_inner(const StaggeredGrid& g, const BoxField& u, const BoxField& v) {
  const cplx s = (v.E.conjugate().cwiseProduct(u.E)).sum() + (v.H.conjugate().cwiseProduct(u.H)).sum();
  return s * std::pow(g.h(), 3);
}

namespace {

void check_support(const StaggeredGrid& g, const BoxField& f) {
  const double lim = g.r_max();
  double peak = 0.0;
  for (Id c = 0; c < g.n_cells(); ++c) peak = std::max(peak, sq(f.E, c) + sq(f.H, c));
  // Values at roundoff level relative to the peak count as zero.
  for (Id c = 0; c < g.n_cells(); ++c) {
    if (sq(f.E, c) + sq(f.H, c) <= 1e-28 * peak) continue;
    if (g.cell_center(c).norm() > lim)
      throw Error(ErrorCode::SupportViolation,
                  fmt::format("field is nonzero at |x| = {:.3f} outside the ball of radius {:.3f}",
                              g.cell_center(c).norm(), lim));
  }
}

// Forward transforms of the three columns.
std::array<CVec, 3> forward3(const detail::PaddedFFT& fft, const CellVectors& v) {
  return {fft.forward(v.col(0)), fft.forward(v.col(1)), fft.forward(v.col(2))};
}

}  // namespace

WholeSpaceSplit whole_space_project(const StaggeredGrid& g, const BoxField& f) {
  if (f.E.rows() != g.n_cells() || f.H.rows() != g.n_cells())
    throw Error(ErrorCode::DimensionMismatch, "box field does not match the grid");
  check_support(g, f);
  detail::PaddedFFT fft(g.n(), g.h(), 2);
  WholeSpaceSplit out;
  out.rot_free = box_zeros(g);
  out.div_free = box_zeros(g);
  double cross = 0.0, total = 0.0;
  for (int blk = 0; blk < 2; ++blk) {
    const CellVectors& v = blk == 0 ? f.E : f.H;
    const auto fs = forward3(fft, v);
    std::array<CVec, 3> rs{CVec(fft.size()), CVec(fft.size()), CVec(fft.size())};
    cplx cr = 0.0;
    for (Id q = 0; q < fft.size(); ++q) {
      const Vec3 k = fft.central_symbol(q);
      const double k2 = k.squaredNorm();
      const cplx kf = k.x() * fs[0][q] + k.y() * fs[1][q] + k.z() * fs[2][q];
      for (int d = 0; d < 3; ++d) {
        rs[d][q] = k2 > 0.0 ? k[d] * kf / k2 : cplx(0.0);
        cr += std::conj(fs[d][q] - rs[d][q]) * rs[d][q];
        total += std::norm(fs[d][q]);
      }
    }
    cross += std::abs(cr);
    CellVectors& r = blk == 0 ? out.rot_free.E : out.rot_free.H;
    for (int d = 0; d < 3; ++d) r.col(d) = fft.inverse(rs[d]);
  }
  out.div_free = f - out.rot_free;
  out.cross_inner = total > 0.0 ? cross / total : 0.0;
  const double fn = box_norm(g, f);
  if (fn > 0.0) {
    out.reassembly = box_norm(g, f - out.rot_free - out.div_free) / fn;
    out.curl_residual = box_norm(g, box_rot(g, out.rot_free)) / fn;
    const CellVectors dv = box_divergence(g, out.div_free);
    out.div_residual = std::sqrt(dv.col(0).squaredNorm() + dv.col(1).squaredNorm()) *
                       std::pow(g.h(), 1.5) / fn;
  }
  return out;
}

BoxField lemma_u2(const StaggeredGrid& g, const BoxField& f2) {
  detail::PaddedFFT fft(g.n(), g.h(), 2);
  const auto fe = forward3(fft, f2.E), fh = forward3(fft, f2.H);
  std::array<CVec, 3> ue{CVec(fft.size()), CVec(fft.size()), CVec(fft.size())};
  std::array<CVec, 3> uh = ue;
  for (Id q = 0; q < fft.size(); ++q) {
    const Vec3 k = fft.central_symbol(q);
    const double s = 1.0 / (1.0 + k.squaredNorm());
    const CVec3 e(fe[0][q], fe[1][q], fe[2][q]), h(fh[0][q], fh[1][q], fh[2][q]);
    const Eigen::Vector3cd kc = k.cast<cplx>();
    // i |k| Xi_k (E, H) = (-i k x H, i k x E)
    const CVec3 kxh(kc.y() * h.z() - kc.z() * h.y(), kc.z() * h.x() - kc.x() * h.z(), kc.x() * h.y() - kc.y() * h.x());
    const CVec3 kxe(kc.y() * e.z() - kc.z() * e.y(), kc.z() * e.x() - kc.x() * e.z(), kc.x() * e.y() - kc.y() * e.x());
    const CVec3 a = s * (e + I_UNIT * kxh), b = s * (h - I_UNIT * kxe);
    for (int d = 0; d < 3; ++d) {
      ue[d][q] = a[d];
      uh[d][q] = b[d];
    }
  }
  BoxField u = box_zeros(g);
  for (int d = 0; d < 3; ++d) {
    u.E.col(d) = fft.inverse(ue[d]);
    u.H.col(d) = fft.inverse(uh[d]);
  }
  return u;
}

namespace {

struct Cutoff {
  double r_in = 0.0, r_out = 0.0;
  CutoffFamily fam;
  bool family = false;
  double eta(double r) const {
    return family ? fam.profile(r / fam.r0) : smooth_cutoff(r, r_in, r_out);
  }
};

Cutoff make_cutoff(const StaggeredGrid& g, const LemmaOptions& opts) {
  Cutoff c;
  if (opts.r_in > 0.0 || opts.r_out > 0.0) {
    if (!(opts.r_out > opts.r_in && opts.r_in > 0.0))
      throw Error(ErrorCode::BadParameters, "lemma cutoff needs 0 < r_in < r_out");
    c.r_in = opts.r_in;
    c.r_out = opts.r_out;
  } else {
    c.family = true;
    c.fam = CutoffFamily{g.r0(), 0.1};
  }
  return c;
}

// Parts of (Lambda - Lambda0) u and Lambda f at cell centres.
BoxField apply_cells(const MaterialField& mat, const BoxField& u, bool hat) {
  BoxField out{CellVectors(u.E.rows(), 3), CellVectors(u.H.rows(), 3)};
  for (Id c = 0; c < u.E.rows(); ++c) {
    Mat3 e = mat.eps(c), m = mat.mu(c);
    if (hat) {
      e -= mat.eps0() * Mat3::Identity();
      m -= mat.mu0() * Mat3::Identity();
    }
    out.E.row(c) = (e.cast<cplx>() * u.E.row(c).transpose()).transpose();
    out.H.row(c) = (m.cast<cplx>() * u.H.row(c).transpose()).transpose();
  }
  return out;
}

BoxField scale_blocks(const BoxField& u, cplx se, cplx sh) { return {se * u.E, sh * u.H}; }

// Commutator Rot_h(eta_check u) - eta_check Rot_h u; tends to (-grad eta_check x H, grad eta_check x E).
BoxField commutator(const StaggeredGrid& g, const BoxField& chk_u, const std::vector<double>& chk, const BoxField& u) {
  BoxField out = box_rot(g, chk_u);
  const BoxField ru = box_rot(g, u);
  for (Id c = 0; c < g.n_cells(); ++c) {
    out.E.row(c) -= chk[c] * ru.E.row(c);
    out.H.row(c) -= chk[c] * ru.H.row(c);
  }
  return out;
}

}  // namespace

LemmaDecomposition lemma41_decompose(const FieldPair& u, const FieldPair& f, cplx omega, const MaxwellOperator& op,
                                     const LemmaOptions& opts) {
  if (omega == 0.0) throw Error(ErrorCode::OmegaZero, "lemma decomposition needs omega != 0");
  const auto& dm = op.dofs();
  const auto& g = dm.grid();
  const auto& mat = op.ops().material();
  const double e0 = mat.eps0(), m0 = mat.mu0();
  const Cutoff cut = make_cutoff(g, opts);

  LemmaDecomposition d;
  d.omega = omega;
  d.h = g.h();
  const BoxField U = box_extend(dm, u), F = box_extend(dm, f);
  BoxField chk = box_zeros(g);  // eta_check u
  std::vector<double> w(g.n_cells());
  d.eta_u = box_zeros(g);
  for (Id c = 0; c < g.n_cells(); ++c) {
    const double eta = cut.eta(g.cell_center(c).norm());
    w[c] = 1.0 - eta;
    d.eta_u.E.row(c) = eta * U.E.row(c);
    d.eta_u.H.row(c) = eta * U.H.row(c);
    chk.E.row(c) = (1.0 - eta) * U.E.row(c);
    chk.H.row(c) = (1.0 - eta) * U.H.row(c);
  }
  // f1 = (C - i w eta_check Lambda_hat) u - i eta_check Lambda f
  BoxField lam_hat_u = apply_cells(mat, U, true), lam_f = apply_cells(mat, F, false);
  for (Id c = 0; c < g.n_cells(); ++c) {
    lam_hat_u.E.row(c) *= w[c];
    lam_hat_u.H.row(c) *= w[c];
    lam_f.E.row(c) *= w[c];
    lam_f.H.row(c) *= w[c];
  }
  d.f1 = commutator(g, chk, w, U) - (I_UNIT * omega) * lam_hat_u - I_UNIT * lam_f;

  const WholeSpaceSplit split = whole_space_project(g, d.f1);
  d.f_rot = split.rot_free;
  d.f_div = split.div_free;
  d.f2 = d.f_div;  // no S_s correction
  d.u1 = scale_blocks(d.f_rot, -I_UNIT / (omega * e0), -I_UNIT / (omega * m0));
  d.u2 = lemma_u2(g, d.f2);
  // u3 is the remainder, so the four pieces add up to u exactly
  d.u3 = chk - d.u1 - d.u2;
  d.u_tilde = d.u2 + d.u3;
  d.f3 = scale_blocks(d.f2, 1.0 - I_UNIT * omega * m0, 1.0 - I_UNIT * omega * e0) -
         (1.0 + omega * omega * e0 * m0) * d.u2;

  const int n = g.n(), mg = opts.margin;
  auto region = [&](const Vec3& x) {
    const double lim = 0.5 * g.length() - mg * g.h();
    return x.cwiseAbs().maxCoeff() < lim && (!opts.region || opts.region(x));
  };
  (void)n;
  auto rel = [&](const BoxField& r, const BoxField& rhs, double& abs_out) {
    abs_out = box_norm(g, r, 0.0, region);
    const double s = box_norm(g, rhs, 0.0, region);
    return s > 0.0 ? abs_out / s : abs_out;
  };
  const BoxField r1 = box_rot(g, chk) + scale_blocks(chk, I_UNIT * omega * e0, I_UNIT * omega * m0) - d.f1;
  d.residual1 = rel(r1, d.f1, d.abs_residual1);
  const BoxField r2 = box_rot(g, d.u_tilde) + scale_blocks(d.u_tilde, I_UNIT * omega * e0, I_UNIT * omega * m0) - d.f2;
  d.residual2 = rel(r2, d.f2, d.abs_residual2);
  const BoxField r3 = box_laplacian(g, d.u3) + (omega * omega * e0 * m0) * d.u3 - d.f3;
  d.residual3 = rel(r3, d.f3, d.abs_residual3);
  const double un = box_norm(g, U);
  d.reassembly = un > 0.0 ? box_norm(g, U - d.eta_u - d.u1 - d.u2 - d.u3) / un : 0.0;
  d.f1_norm = box_norm(g, d.f1);
  d.f2_norm = box_norm(g, d.f2);
  return d;
}

LemmaConstants lemma41_constants(const MaxwellOperator& op, cplx omega, int samples, double s, double kappa,
                                 double support, std::uint64_t seed, const LemmaOptions& opts) {
  if (samples < 2) throw Error(ErrorCode::BadParameters, "need at least two samples");
  const auto& dm = op.dofs();
  const auto& g = dm.grid();
  std::mt19937_64 rng(seed);
  LemmaConstants out;
  auto inside = [support](const Vec3& x) { return x.norm() <= support; };
  for (int it = 0; it < samples; ++it) {
    const FieldPair u = random_field(dm.n_edges(), dm.n_faces(), rng);
    FieldPair f = random_field(dm.n_edges(), dm.n_faces(), rng);
    const auto& ep = dm.positions(Location::Edge);
    const auto& fp = dm.positions(Location::Face);
    // Colocation spreads one cell, so keep f a cell inside the support ball.
    for (Id i = 0; i < dm.n_edges(); ++i)
      if (!inside(ep[i] * (1.0 + g.h() / std::max(support, g.h())))) f.E[i] = 0.0;
    for (Id i = 0; i < dm.n_faces(); ++i)
      if (!inside(fp[i] * (1.0 + g.h() / std::max(support, g.h())))) f.H[i] = 0.0;
    const auto d = lemma41_decompose(u, f, omega, op, opts);
    const BoxField U = box_extend(dm, u), F = box_extend(dm, f);
    const double rhs = box_norm(g, F, s) + box_norm(g, U, s - kappa);
    out.c_f2.push_back(d.f1_norm > 0.0 ? d.f2_norm / d.f1_norm : 0.0);
    out.c_f1.push_back(rhs > 0.0 ? d.f1_norm / rhs : 0.0);
  }
  auto mm = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()) / median(v); };
  out.max_over_median_f2 = mm(out.c_f2);
  out.max_over_median_f1 = mm(out.c_f1);
  out.bounded = out.max_over_median_f2 <= 5.0 && out.max_over_median_f1 <= 5.0;
  return out;
}

DecayFit decay_fit(const BoxField& u, const StaggeredGrid& g, const std::vector<double>& shells) {
  if (shells.size() < 4)
    throw Error(ErrorCode::InsufficientShells, fmt::format("decay fit needs 4 shells, got {}", shells.size()));
  for (double r : shells)
    if (!(r > 0.0 && r < g.r_max()))
      throw Error(ErrorCode::ShellOutsideDomain, fmt::format("shell radius {} outside (0, R_max)", r));
  DecayFit fit;
  fit.radii = shells;
  const std::size_t ns = shells.size();
  std::vector<double> sum(ns, 0.0);
  std::vector<int> count(ns, 0);
  fit.weighted.assign(fit.t_values.size(), std::vector<double>(ns - 1, 0.0));
  const double h3 = std::pow(g.h(), 3);
  for (Id c = 0; c < g.n_cells(); ++c) {
    if (g.masked(c)) continue;
    const Vec3 x = g.cell_center(c);
    const double v = sq(u.E, c) + sq(u.H, c);
    const double r = x.norm();
    for (std::size_t s = 0; s < ns; ++s)
      if (in_shell(x, shells[s], g.h())) {
        sum[s] += v;
        ++count[s];
      }
    for (std::size_t s = 0; s + 1 < ns; ++s) {
      if (r < shells[s] || r >= shells[s + 1]) continue;
      for (std::size_t ti = 0; ti < fit.t_values.size(); ++ti)
        fit.weighted[ti][s] += std::pow(1.0 + r * r, fit.t_values[ti]) * v * h3;
    }
  }
  for (std::size_t s = 0; s < ns; ++s) fit.shell_rms.push_back(count[s] ? std::sqrt(sum[s] / count[s]) : 0.0);
  for (auto& row : fit.weighted)
    for (double& v : row) v = std::sqrt(v);
  fit.slope = loglog_slope(fit.radii, fit.shell_rms);
  return fit;
}

DecayFit decay_fit(const FieldPair& u, const DofMap& dofs, const std::vector<double>& shells) {
  return decay_fit(box_extend(dofs, u), dofs.grid(), shells);
}

}  // namespace limabs
