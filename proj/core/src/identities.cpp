// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/identities.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "limabs/decomposition.hpp"
#include "limabs/errors.hpp"
#include "limabs/oracles.hpp"

namespace limabs {

double weight_antiderivative(double s, double t, double r_hat, double r_tilde) {
  const double a = std::max(r_hat, s);
  if (a >= r_tilde) return 0.0;
  auto phi = [t](double x) { return std::pow(1.0 + x * x, t); };
  return boost::math::quadrature::gauss<double, 20>::integrate(phi, a, r_tilde);
}

namespace {

CVec3 row3(const CellVectors& v, Id c) { return v.row(c).transpose(); }

// a . conj(b); Eigen's dot conjugates the left operand
cplx dotc(const CVec3& a, const CVec3& b) { return b.dot(a); }

// Eigen's cross conjugates complex operands.
CVec3 cross(const Vec3& a, const CVec3& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

}  // namespace

PartialIntegrationReport partial_integration_identity(const StaggeredGrid& g, const CellPair& u, double t,
                                                      double r_hat, double r_tilde, double eps0, double mu0) {
  if (!(r_tilde > r_hat && r_hat > 0.0))
    throw Error(ErrorCode::BadParameters, "need 0 < r_hat < r_tilde");
  if (!(r_tilde < g.r_max()))
    throw Error(ErrorCode::ShellOutsideDomain, fmt::format("r_tilde = {} must stay below R_max = {}", r_tilde, g.r_max()));
  if (u.E.rows() != g.n_cells() || u.H.rows() != g.n_cells())
    throw Error(ErrorCode::DimensionMismatch, "cell field does not match the grid");
  const CellPair lu{eps0 * u.E, mu0 * u.H};
  const CellPair ru = box_rot(g, u), rlu = box_rot(g, lu);
  PartialIntegrationReport rep;
  rep.t = t;
  rep.r_hat = r_hat;
  rep.r_tilde = r_tilde;
  rep.h = g.h();
  double scale = 0.0;
  for (Id c = 0; c < g.n_cells(); ++c) {
    if (g.masked(c)) continue;
    const Vec3 x = g.cell_center(c);
    const double r = x.norm();
    if (r >= r_tilde || r == 0.0) continue;
    const CVec3 e = row3(u.E, c), h = row3(u.H, c);
    const CVec3 le = row3(lu.E, c), lh = row3(lu.H, c);
    if (r > r_hat) {
      const Vec3 xi = x / r;
      const CVec3 xe = -cross(xi, h), xh = cross(xi, e);  // Xi u
      const double phi = std::pow(1.0 + r * r, t);
      rep.lhs += phi * (dotc(xe, le) + dotc(xh, lh));
      scale += std::abs(phi) * (xe.norm() * le.norm() + xh.norm() * lh.norm());
    }
    const double psi = weight_antiderivative(r, t, r_hat, r_tilde);
    const CVec3 re = row3(ru.E, c), rh = row3(ru.H, c);
    const CVec3 rle = row3(rlu.E, c), rlh = row3(rlu.H, c);
    rep.rhs += psi * (dotc(re, le) + dotc(rh, lh) + dotc(e, rle) + dotc(h, rlh));
    scale += std::abs(psi) * (re.norm() * le.norm() + rh.norm() * lh.norm() + e.norm() * rle.norm() +
                              h.norm() * rlh.norm());
  }
  const double h3 = std::pow(g.h(), 3);
  rep.lhs *= h3;
  rep.rhs *= h3;
  rep.scale = scale * h3;
  rep.difference = std::abs(rep.lhs - rep.rhs);
  return rep;
}

std::vector<IntegrationRule> integration_rules(const StaggeredGrid& g, const ScalarField& w, double m,
                                               double r_tilde) {
  if (!(r_tilde > 0.0 && r_tilde < g.r_max()))
    throw Error(ErrorCode::ShellOutsideDomain, fmt::format("r_tilde = {} outside (0, R_max)", r_tilde));
  const CellVectors gr = scalar_gradient(g, w);
  const ScalarField lap = scalar_laplacian(g, w);
  const double n = 3.0;
  const double h = g.h(), h3 = h * h * h, h2 = h * h;
  std::array<double, 4> lhs{}, rhs{}, scale{};
  auto add = [](double& acc, double& sc, double v) {
    acc += v;
    sc += std::abs(v);
  };
  for (Id c = 0; c < g.n_cells(); ++c) {
    const Vec3 x = g.cell_center(c);
    const double r = x.norm();
    if (r == 0.0) continue;
    const CVec3 gv = row3(gr, c);
    const cplx dr = (x / r).cast<cplx>().dot(gv);  // xi . grad w
    const cplx wc = w[c];
    const double g2 = gv.squaredNorm(), dr2 = std::norm(dr), w2 = std::norm(wc);
    const double rm = std::pow(r, m);
    if (r < r_tilde) {
      add(lhs[0], scale[0], h3 * std::real(rm * r * lap[c] * std::conj(dr)));
      add(rhs[0], scale[0], h3 * 0.5 * rm * ((n + m - 2.0) * g2 - 2.0 * m * dr2));
      add(lhs[1], scale[1], h3 * std::real(rm * lap[c] * std::conj(wc)));
      add(rhs[1], scale[1], -h3 * rm * (g2 - 0.5 * m * (n + m - 2.0) * w2 / (r * r)));
      add(lhs[2], scale[2], h3 * std::imag(rm * lap[c] * std::conj(wc)));
      add(rhs[2], scale[2], -h3 * m * rm / r * std::imag(dr * std::conj(wc)));
      add(lhs[3], scale[3], h3 * std::real(rm * r * wc * std::conj(dr)));
      add(rhs[3], scale[3], -h3 * 0.5 * rm * (n + m) * w2);
    }
    if (in_shell(x, r_tilde, h)) {
      // thin-shell surface quadrature: volume h^3 over thickness h
      add(rhs[0], scale[0], h2 * rm * r * (dr2 - 0.5 * g2));
      add(rhs[1], scale[1], h2 * rm * (std::real(dr * std::conj(wc)) - 0.5 * m * w2 / r));
      add(rhs[2], scale[2], h2 * rm * std::imag(dr * std::conj(wc)));
      add(rhs[3], scale[3], h2 * 0.5 * rm * r * w2);
    }
  }
  std::vector<IntegrationRule> out;
  for (int k = 0; k < 4; ++k)
    out.push_back({k + 1, m, lhs[k], rhs[k], std::abs(lhs[k] - rhs[k]), scale[k]});
  return out;
}

}  // namespace limabs
