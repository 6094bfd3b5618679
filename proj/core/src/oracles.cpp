// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/oracles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "limabs/errors.hpp"
#include "limabs/resolvent.hpp"

namespace limabs {

namespace {


// Eigen's cross conjugates complex operands.
CVec3 cross(const Vec3& a, const CVec3& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

}  // namespace

FieldPair sample_dofs(const DofMap& dm, const FieldFn& fn) {
  const auto& g = dm.grid();
  FieldPair u = FieldPair::zeros(dm);
  const auto& ep = dm.positions(Location::Edge);
  for (Id i = 0; i < dm.n_edges(); ++i) u.E[i] = fn(ep[i]).E[g.decode_edge(dm.edges()[i])[0]];
  const auto& fp = dm.positions(Location::Face);
  for (Id i = 0; i < dm.n_faces(); ++i) u.H[i] = fn(fp[i]).H[g.decode_face(dm.faces()[i])[0]];
  return u;
}

CellPair sample_cells(const StaggeredGrid& g, const FieldFn& fn) {
  CellPair c{CellVectors(g.n_cells(), 3), CellVectors(g.n_cells(), 3)};
  for (Id i = 0; i < g.n_cells(); ++i) {
    const PointField p = fn(g.cell_center(i));
    c.E.row(i) = p.E.transpose();
    c.H.row(i) = p.H.transpose();
  }
  return c;
}

std::vector<cplx> spherical_hn(int nmax, cplx z) {
  if (std::abs(z) < 1e-300) throw Error(ErrorCode::OracleFailure, "spherical Hankel at z = 0");
  std::vector<cplx> h(std::max(nmax, 1) + 1);
  const cplx e = std::exp(I_UNIT * z);
  h[0] = -I_UNIT * e / z;
  h[1] = -e * (z + I_UNIT) / (z * z);
  for (int n = 1; n < nmax; ++n) h[n + 1] = double(2 * n + 1) / z * h[n] - h[n - 1];
  h.resize(nmax + 1);
  return h;
}

std::vector<cplx> spherical_jn(int nmax, cplx z) {
  if (std::abs(z) < 1e-300) throw Error(ErrorCode::OracleFailure, "spherical Bessel at z = 0");
  // Miller's downward recurrence, normalised by j0 or j1.
  const int start = nmax + 20 + int(2.0 * std::abs(z));
  std::vector<cplx> f(start + 2, 0.0);
  f[start] = 1e-30;
  for (int n = start; n >= 1; --n) {
    f[n - 1] = double(2 * n + 1) / z * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > 1e250)
      for (int m = n - 1; m <= start; ++m) f[m] *= 1e-250;
  }
  const cplx j0 = std::sin(z) / z;
  const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  const cplx scale = std::abs(j0) >= std::abs(j1) ? j0 / f[0] : j1 / f[1];
  std::vector<cplx> j(nmax + 1);
  for (int n = 0; n <= nmax; ++n) j[n] = f[n] * scale;
  return j;
}

PointField plane_wave(const PlaneWaveSpec& pw, cplx omega, double eps0, double mu0, const Vec3& x) {
  const cplx k = omega * std::sqrt(eps0 * mu0);
  PointField p;
  p.E = (pw.amplitude * std::exp(I_UNIT * k * pw.direction.dot(x))) * pw.polarization.cast<cplx>();
  p.H = -(k / (omega * mu0)) * cross(pw.direction, p.E);
  return p;
}

MieSolution::MieSolution(cplx omega, double radius, PlaneWaveSpec incident, double eps0, double mu0, int max_order)
    : omega_(omega), k_(omega * std::sqrt(eps0 * mu0)), a_(radius), eps0_(eps0), mu0_(mu0), inc_(std::move(incident)) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadParameters, "Mie sphere radius must be positive");
  if (omega == 0.0) throw Error(ErrorCode::OmegaZero, "Mie solution needs omega != 0");
  const Vec3 d = inc_.direction.normalized();
  Vec3 p = inc_.polarization - inc_.polarization.dot(d) * d;
  if (p.norm() < 1e-12) throw Error(ErrorCode::BadParameters, "polarization parallel to direction");
  p.normalize();
  inc_.direction = d;
  inc_.polarization = p;
  rot_.col(0) = p;
  rot_.col(1) = d.cross(p);
  rot_.col(2) = d;

  const cplx x = k_ * a_;
  const auto j = spherical_jn(max_order + 1, x);
  const auto h = spherical_hn(max_order + 1, x);
  std::vector<cplx> an, bn;
  double amax = 0.0;
  int stop = -1;
  for (int n = 1; n <= max_order; ++n) {
    const cplx dpsi = x * j[n - 1] - double(n) * j[n];
    const cplx dxi = x * h[n - 1] - double(n) * h[n];
    an.push_back(dpsi / dxi);
    bn.push_back(j[n] / h[n]);
    const double mag = std::abs(an.back()) + std::abs(bn.back());
    amax = std::max(amax, mag);
    // The coefficient tail alone leaves ~sqrt(1e-12) in the field at r = a,
    // where a_n h_n behaves like j_n; also wait for j_n itself to die out.
    if (n >= 2 && mag <= 1e-12 * amax && std::abs(j[n]) <= 1e-14) {
      stop = n;
      break;
    }
  }
  if (stop < 0)
    throw Error(ErrorCode::TruncationInsufficient,
                fmt::format("Mie series for k a = {} not converged within order {}", std::abs(x), max_order));
  an_ = std::move(an);
  bn_ = std::move(bn);
}

double MieSolution::tail() const {
  double mx = 0.0;
  for (std::size_t i = 0; i < an_.size(); ++i) mx = std::max(mx, std::abs(an_[i]) + std::abs(bn_[i]));
  return (std::abs(an_.back()) + std::abs(bn_.back())) / mx;
}

PointField MieSolution::incident(const Vec3& x) const { return plane_wave(inc_, omega_, eps0_, mu0_, x); }

PointField MieSolution::scattered(const Vec3& xg) const {
  const Vec3 x = rot_.transpose() * xg;
  const double r = x.norm();
  if (r == 0.0) throw Error(ErrorCode::OracleFailure, "Mie field at the origin");
  const double ct = std::clamp(x.z() / r, -1.0, 1.0);
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  const double phi = std::atan2(x.y(), x.x());
  const double cp = std::cos(phi), sp = std::sin(phi);
  const Vec3 er(st * cp, st * sp, ct), et(ct * cp, ct * sp, -st), ef(-sp, cp, 0.0);

  const int L = order();
  const cplx rho = k_ * r;
  const auto hn = spherical_hn(L, rho);
  cplx Er = 0, Et = 0, Ef = 0, Hr = 0, Ht = 0, Hf = 0;
  double pim1 = 0.0, pi = 1.0;  // pi_0, pi_1
  cplx ipow = I_UNIT;
  for (int n = 1; n <= L; ++n) {
    if (n > 1) {
      const double next = (double(2 * n - 1) * ct * pi - double(n) * pim1) / double(n - 1);
      pim1 = pi;
      pi = next;
    }
    const double tau = n * ct * pi - (n + 1) * pim1;
    const cplx En = ipow * inc_.amplitude * double(2 * n + 1) / double(n * (n + 1));
    ipow *= I_UNIT;
    const cplx z = hn[n];
    const cplx dz = (rho * hn[n - 1] - double(n) * hn[n]) / rho;  // [rho z_n]' / rho
    const cplx zr = z / rho;
    const cplx a = an_[n - 1], b = bn_[n - 1];
    // N_e1n, M_o1n for E; N_o1n, M_e1n for H
    const cplx Ne_r = cp * double(n * (n + 1)) * st * pi * zr, Ne_t = cp * tau * dz, Ne_f = -sp * pi * dz;
    const cplx Mo_t = cp * pi * z, Mo_f = -sp * tau * z;
    const cplx No_r = sp * double(n * (n + 1)) * st * pi * zr, No_t = sp * tau * dz, No_f = cp * pi * dz;
    const cplx Me_t = -sp * pi * z, Me_f = -cp * tau * z;
    Er += En * (I_UNIT * a * Ne_r);
    Et += En * (I_UNIT * a * Ne_t - b * Mo_t);
    Ef += En * (I_UNIT * a * Ne_f - b * Mo_f);
    Hr += En * (I_UNIT * b * No_r);
    Ht += En * (I_UNIT * b * No_t + a * Me_t);
    Hf += En * (I_UNIT * b * No_f + a * Me_f);
  }
  // curl E = -i omega mu H here, the opposite sign of the e^{-i omega t} literature
  const cplx hs = -k_ / (omega_ * mu0_);
  PointField p;
  const CVec3 el = Er * er.cast<cplx>() + Et * et.cast<cplx>() + Ef * ef.cast<cplx>();
  const CVec3 hl = hs * (Hr * er.cast<cplx>() + Ht * et.cast<cplx>() + Hf * ef.cast<cplx>());
  p.E = rot_.cast<cplx>() * el;
  p.H = rot_.cast<cplx>() * hl;
  return p;
}

PointField MieSolution::total(const Vec3& x) const {
  PointField a = incident(x), b = scattered(x);
  return {a.E + b.E, a.H + b.H};
}

double MieSolution::scattering_cross_section() const {
  double s = 0.0;
  for (int n = 1; n <= order(); ++n) s += (2 * n + 1) * (std::norm(an_[n - 1]) + std::norm(bn_[n - 1]));
  return 2.0 * kPi / std::norm(k_) * s;
}

double MieSolution::extinction_cross_section() const {
  double s = 0.0;
  for (int n = 1; n <= order(); ++n) s += (2 * n + 1) * (an_[n - 1] + bn_[n - 1]).real();
  return 2.0 * kPi / std::norm(k_) * s;
}

FieldPair mie_pec_sphere(const MieSolution& mie, const DofMap& dofs, MiePart part) {
  switch (part) {
    case MiePart::Incident: return sample_dofs(dofs, [&](const Vec3& x) { return mie.incident(x); });
    case MiePart::Scattered: return sample_dofs(dofs, [&](const Vec3& x) { return mie.scattered(x); });
    case MiePart::Total: return sample_dofs(dofs, [&](const Vec3& x) { return mie.total(x); });
  }
  return {};
}

PointField dipole(const DipoleSpec& d, const Vec3& xg) {
  const Vec3 x = xg - d.position;
  const double r = x.norm();
  if (r == 0.0) throw Error(ErrorCode::OracleFailure, "dipole field at its source");
  const Vec3 n = x / r;
  const cplx k = (d.outgoing ? 1.0 : -1.0) * d.omega * std::sqrt(d.eps0 * d.mu0);
  const cplx e = std::exp(I_UNIT * k * r);
  const cplx np = n.x() * d.moment.x() + n.y() * d.moment.y() + n.z() * d.moment.z();
  const CVec3 trans = d.moment - np * n.cast<cplx>();             // (n x p) x n
  const CVec3 quad = 3.0 * np * n.cast<cplx>() - d.moment;         // 3 n (n.p) - p
  PointField p;
  p.E = e / (4.0 * kPi * d.eps0) * (k * k / r * trans + (1.0 / (r * r * r) - I_UNIT * k / (r * r)) * quad);
  p.H = -(d.omega * k / (4.0 * kPi)) * e / r * (1.0 - 1.0 / (I_UNIT * k * r)) * cross(n, d.moment);
  return p;
}

FieldPair dipole_field(const DipoleSpec& d, const DofMap& dofs) {
  return sample_dofs(dofs, [&](const Vec3& x) { return dipole(d, x); });
}

CVec grad_ln_r_field(const DofMap& dm) {
  const auto& g = dm.grid();
  const auto& pos = dm.positions(Location::Edge);
  CVec e(dm.n_edges());
  for (Id i = 0; i < dm.n_edges(); ++i) {
    const int d = g.decode_edge(dm.edges()[i])[0];
    e[i] = pos[i][d] / pos[i].squaredNorm();
  }
  return e;
}

CVec grad_ln_r_integrated(const DofMap& dm) {
  const auto& g = dm.grid();
  const auto& pos = dm.positions(Location::Edge);
  CVec e(dm.n_edges());
  const double h = g.h();
  for (Id i = 0; i < dm.n_edges(); ++i) {
    const int d = g.decode_edge(dm.edges()[i])[0];
    Vec3 a = pos[i], b = pos[i];
    a[d] -= 0.5 * h;
    b[d] += 0.5 * h;
    e[i] = (std::log(b.norm()) - std::log(a.norm())) / h;
  }
  return e;
}

DenseOracleReport dense_mini_oracle(int n_small, std::uint64_t seed) {
  if (n_small < 2 || n_small > 6) throw Error(ErrorCode::BadParameters, "dense oracle needs 2 <= N <= 6");
  DenseOracleReport rep;
  rep.n_small = n_small;
  const double h = 1.0;
  auto g = StaggeredGrid::tiny(h, n_small, ObstacleSpec::none(), 0.2 * n_small * h);
  auto dm = std::make_shared<DofMap>(g, classify_boundary(g, BcRule::all_gamma1()));
  auto ops = std::make_shared<BlockOperators>(dm, MaterialField::vacuum(g));
  auto op = std::make_shared<MaxwellOperator>(dm, ops);
  rep.n_edges = dm->n_edges();
  rep.n_faces = dm->n_faces();

  const RMat rot = RMat(op->rot_matrix());
  rep.antisymmetry = (rot + rot.transpose()).norm();

  const RMat c = RMat(op->curl());
  Eigen::JacobiSVD<RMat> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::JacobiSVD<RMat> svdt(RMat(c.transpose()));
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * sv[0];
  Id rank = 0;
  while (rank < sv.size() && sv[rank] > tol) ++rank;
  rep.sigma_min_a = sv[rank - 1];
  const auto& svt = svdt.singularValues();
  Id rank_t = 0;
  while (rank_t < svt.size() && svt[rank_t] > tol) ++rank_t;
  rep.sigma_min_a_adj = svt[rank_t - 1];
  rep.c_a = 1.0 / rep.sigma_min_a;
  rep.c_a_adj = 1.0 / rep.sigma_min_a_adj;

  const RMat& v = svd.matrixV();
  const Id ne = c.cols();
  RMat pinv = v.leftCols(rank) * sv.head(rank).cwiseInverse().asDiagonal() * svd.matrixU().leftCols(rank).transpose();
  rep.inverse_norm = Eigen::JacobiSVD<RMat>(pinv).singularValues()[0];

  const RMat range = v.leftCols(rank);
  const RMat ker = v.rightCols(ne - rank);
  rep.kernel_dim = ne - rank;
  rep.orthogonality = rep.kernel_dim > 0 ? (range.transpose() * ker).cwiseAbs().maxCoeff() : 0.0;
  rep.completeness = (range * range.transpose() + ker * ker.transpose() - RMat::Identity(ne, ne)).norm();

  const RMat grad = RMat(assemble_gradient(*dm));
  if (grad.cols() > 0) {
    Eigen::JacobiSVD<RMat> gs(grad);
    const auto& gv = gs.singularValues();
    Id r = 0;
    while (r < gv.size() && gv[r] > 1e-10 * gv[0]) ++r;
    rep.gradient_dim = r;
  }

  // vacuum: Lambda = h^3 I, so the Lambda norm is a scaled Euclidean norm
  const CMat m = I_UNIT * rot.cast<cplx>();
  const Id n = m.rows();
  const CMat shifted = m - I_UNIT * CMat::Identity(n, n);
  Eigen::JacobiSVD<CMat> rs(shifted);
  rep.resolvent_norm_svd = 1.0 / rs.singularValues()[n - 1];
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().cwiseAbs().minCoeff();
  rep.resolvent_norm_formula = 1.0 / std::sqrt(1.0 + lmin * lmin);
  rep.resolvent_norm_probe = resolvent_norm_probe(op, I_UNIT, 60, seed).norm_estimate;

  rep.pass = rep.antisymmetry == 0.0 && std::abs(rep.c_a - rep.c_a_adj) <= 1e-12 * rep.c_a &&
             std::abs(rep.inverse_norm - rep.c_a) <= 1e-10 * rep.c_a && rep.orthogonality <= 1e-13 &&
             rep.completeness <= 1e-12 * ne && rep.kernel_dim == rep.gradient_dim &&
             std::abs(rep.resolvent_norm_svd - rep.resolvent_norm_formula) <= 1e-12 &&
             std::abs(rep.resolvent_norm_svd - rep.resolvent_norm_probe) <= 1e-10;
  return rep;
}

cplx radial_green_convolution(cplx k, const std::function<double(double)>& g, double support, double d) {
  if (!(support > 0.0) || d < 0.0) throw Error(ErrorCode::BadParameters, "need support > 0 and d >= 0");
  if (k == 0.0) throw Error(ErrorCode::BadParameters, "k must be nonzero");
  // Sphere average of G(|x - y|) over |y| = s, times 4 pi s^2.
  auto kernel = [&](double s) -> cplx {
    if (d == 0.0) return s * std::exp(I_UNIT * k * s);
    return s * (std::exp(I_UNIT * k * (d + s)) - std::exp(I_UNIT * k * std::abs(d - s))) / (2.0 * I_UNIT * k * d);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto piece = [&](double a, double b) -> cplx {
    if (b <= a) return 0.0;
    const double re = GK::integrate([&](double s) { return g(s) * kernel(s).real(); }, a, b, 12, 1e-13);
    const double im = GK::integrate([&](double s) { return g(s) * kernel(s).imag(); }, a, b, 12, 1e-13);
    return {re, im};
  };
  const double split = std::min(d, support);
  return -(piece(0.0, split) + piece(split, support));
}

}  // namespace limabs
