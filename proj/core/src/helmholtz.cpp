// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fft_box.hpp"
#include "limabs/errors.hpp"
#include "limabs/numerics.hpp"

namespace limabs {

cplx helmholtz_beta2(double nu, double tau) { return cplx(nu * nu, nu * tau); }

namespace {

void check_size(const StaggeredGrid& g, const ScalarField& v) {
  if (v.size() != g.n_cells())
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("scalar field has {} values, the grid has {} cells", v.size(), g.n_cells()));
}

// Periodic 7-point Laplacian on the padded cube.
CVec periodic_laplacian(const detail::PaddedFFT& fft, const CVec& v, double h) {
  const int m = fft.m();
  CVec out(v.size());
  const double s = 1.0 / (h * h);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        const auto at = [&](int a, int b, int c) { return v[fft.index((a + m) % m, (b + m) % m, (c + m) % m)]; };
        out[fft.index(i, j, k)] = s * (at(i + 1, j, k) + at(i - 1, j, k) + at(i, j + 1, k) + at(i, j - 1, k) +
                                       at(i, j, k + 1) + at(i, j, k - 1) - 6.0 * at(i, j, k));
      }
  return out;
}

cplx value(const StaggeredGrid& g, const ScalarField& v, int i, int j, int k) {
  const int n = g.n();
  if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) return 0.0;
  return v[g.cell_id(i, j, k)];
}

}  // namespace

HelmholtzResolventSolve solve_scalar_resolvent(cplx beta2, const ScalarField& g, const StaggeredGrid& grid, int pad) {
  check_size(grid, g);
  if (pad < 1) throw Error(ErrorCode::BadParameters, "pad must be >= 1");
  HelmholtzResolventSolve out;
  out.beta2 = beta2;
  out.beta = sqrt_upper(beta2);
  out.g = g;
  out.pad = pad;
  detail::PaddedFFT fft(grid.n(), grid.h(), pad);
  const CVec gs = fft.forward(g);
  CVec ws(gs.size());
  double dmin = std::numeric_limits<double>::infinity();
  for (Id q = 0; q < fft.size(); ++q) {
    const cplx den = beta2 + fft.laplacian_symbol(q);
    dmin = std::min(dmin, std::abs(den));
    ws[q] = gs[q] / den;
  }
  out.min_denominator = dmin;
  if (dmin < 1e-14)
    throw Error(ErrorCode::ResonantDenominator,
                fmt::format("|beta^2 - |k|_h^2| reaches {:.3e} for beta^2 = {}{:+}i", dmin, beta2.real(), beta2.imag()));
  const CVec wf = fft.inverse_full(ws);
  const CVec gf = fft.inverse_full(gs);
  const CVec r = periodic_laplacian(fft, wf, grid.h()) + beta2 * wf - gf;
  const double gn = gf.norm();
  out.residual = gn > 0.0 ? r.norm() / gn : r.norm();
  out.w_norm_padded = wf.norm() * std::pow(grid.h(), 1.5);
  out.w = fft.crop(wf);
  return out;
}

double scalar_norm(const StaggeredGrid& g, const ScalarField& v, double t) {
  return scalar_norm(g, v, t, std::numeric_limits<double>::infinity());
}

double scalar_norm(const StaggeredGrid& g, const ScalarField& v, double t, double half_width) {
  check_size(g, v);
  double s = 0.0;
  for (Id c = 0; c < g.n_cells(); ++c) {
    if (g.cell_center(c).cwiseAbs().maxCoeff() >= half_width) continue;
    const double w = t == 0.0 ? 1.0 : std::pow(1.0 + g.cell_center(c).squaredNorm(), t);
    s += w * std::norm(v[c]);
  }
  return std::sqrt(s * std::pow(g.h(), 3));
}

CellVectors scalar_gradient(const StaggeredGrid& g, const ScalarField& v) {
  check_size(g, v);
  const int n = g.n();
  const double s = 0.5 / g.h();
  CellVectors out(g.n_cells(), 3);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Id c = g.cell_id(i, j, k);
        out(c, 0) = s * (value(g, v, i + 1, j, k) - value(g, v, i - 1, j, k));
        out(c, 1) = s * (value(g, v, i, j + 1, k) - value(g, v, i, j - 1, k));
        out(c, 2) = s * (value(g, v, i, j, k + 1) - value(g, v, i, j, k - 1));
      }
  return out;
}

ScalarField scalar_laplacian(const StaggeredGrid& g, const ScalarField& v) {
  check_size(g, v);
  const int n = g.n();
  const double s = 1.0 / (g.h() * g.h());
  ScalarField out(g.n_cells());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        out[g.cell_id(i, j, k)] =
            s * (value(g, v, i + 1, j, k) + value(g, v, i - 1, j, k) + value(g, v, i, j + 1, k) +
                 value(g, v, i, j - 1, k) + value(g, v, i, j, k + 1) + value(g, v, i, j, k - 1) -
                 6.0 * value(g, v, i, j, k));
  return out;
}

double h2_weighted_norm(const StaggeredGrid& g, const ScalarField& w, double t) {
  return h2_weighted_norm(g, w, t, std::numeric_limits<double>::infinity());
}

double h2_weighted_norm(const StaggeredGrid& g, const ScalarField& w, double t, double half_width) {
  check_size(g, w);
  const CellVectors gr = scalar_gradient(g, w);
  const int n = g.n();
  const double h2 = g.h() * g.h();
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Id c = g.cell_id(i, j, k);
        if (g.cell_center(c).cwiseAbs().maxCoeff() >= half_width) continue;
        const double rho2 = 1.0 + g.cell_center(c).squaredNorm();
        double second = 0.0;
        const std::array<int, 3> p{i, j, k};
        for (int d = 0; d < 3; ++d) {
          std::array<int, 3> a = p, b = p;
          ++a[d];
          --b[d];
          const cplx dd = (value(g, w, a[0], a[1], a[2]) - 2.0 * w[c] + value(g, w, b[0], b[1], b[2])) / h2;
          second += std::norm(dd);
          for (int e = d + 1; e < 3; ++e) {
            // centred difference of the centred gradient
            std::array<int, 3> up = p, dn = p;
            ++up[e];
            --dn[e];
            auto grad_at = [&](const std::array<int, 3>& q) -> cplx {
              if (q[e] < 0 || q[e] >= n) return 0.0;
              return gr(g.cell_id(q[0], q[1], q[2]), d);
            };
            const cplx de = (grad_at(up) - grad_at(dn)) / (2.0 * g.h());
            second += 2.0 * std::norm(de);
          }
        }
        s += std::pow(rho2, t) * std::norm(w[c]) + std::pow(rho2, t + 1.0) * gr.row(c).squaredNorm() +
             std::pow(rho2, t + 2.0) * second;
      }
  return std::sqrt(s * std::pow(g.h(), 3));
}

H2Report h2_regularity_check(const ScalarField& w, const StaggeredGrid& g, int pad) {
  check_size(g, w);
  detail::PaddedFFT fft(g.n(), g.h(), pad);
  const CVec ws = fft.forward(w);
  // Parseval on the padded cube: sum |w|^2 h^3 = sum |w_hat|^2 h^3 / M^3
  const double scale = std::pow(g.h(), 3) / double(fft.size());
  H2Report r;
  for (Id q = 0; q < fft.size(); ++q) {
    const double k2 = -fft.laplacian_symbol(q);
    const double a = std::norm(ws[q]);
    r.lhs += (k2 * k2 + 1.0) * a;
    r.rhs += 0.5 * (1.0 + k2) * (1.0 + k2) * a;
  }
  r.lhs *= scale;
  r.rhs *= scale;
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 1.0;
  r.holds = r.lhs >= r.rhs - 1e-12 * std::max(1.0, r.rhs);
  return r;
}

DecayStudy scalar_decay_study(double nu, const std::vector<double>& taus, const std::function<cplx(const Vec3&)>& g,
                              const StaggeredGrid& grid, double s, int pad) {
  if (nu == 0.0) throw Error(ErrorCode::BadParameters, "decay study needs nu != 0");
  const StaggeredGrid large(grid.h(), 2 * grid.n(), ObstacleSpec::none(), grid.r0());
  auto sample = [&](const StaggeredGrid& gg) {
    ScalarField v(gg.n_cells());
    for (Id c = 0; c < gg.n_cells(); ++c) v[c] = g(gg.cell_center(c));
    return v;
  };
  const ScalarField g1 = sample(large);
  const double inner = 0.5 * grid.n() * grid.h();
  DecayStudy st;
  st.nu = nu;
  st.s = s;
  for (double tau : taus) {
    if (!(tau > 0.0)) throw Error(ErrorCode::BadParameters, "tau must be positive");
    const cplx b2 = helmholtz_beta2(nu, tau);
    const auto w1 = solve_scalar_resolvent(b2, g1, large, pad);
    DecayRow row;
    row.tau = tau;
    row.largest_stable_t = row.largest_stable_t_l2 = -std::numeric_limits<double>::infinity();
    bool all_h2 = true, all_l2 = true;
    auto close = [](double a, double b) { return b == 0.0 || std::abs(b - a) <= 0.1 * b; };
    for (double t : st.t_grid) {
      const double a = h2_weighted_norm(large, w1.w, t, inner), b = h2_weighted_norm(large, w1.w, t);
      row.h2_norms.push_back(a);
      row.h2_norms_large.push_back(b);
      row.stable.push_back(close(a, b));
      all_h2 = all_h2 && row.stable.back();
      if (all_h2) row.largest_stable_t = t;
      const double la = scalar_norm(large, w1.w, t, inner), lb = scalar_norm(large, w1.w, t);
      row.l2_norms.push_back(la);
      row.l2_norms_large.push_back(lb);
      row.l2_stable.push_back(close(la, lb));
      all_l2 = all_l2 && row.l2_stable.back();
      if (all_l2) row.largest_stable_t_l2 = t;
    }
    row.lemma_lhs = h2_weighted_norm(large, w1.w, s);
    row.lemma_rhs = scalar_norm(large, g1, s + 1.0) + scalar_norm(large, w1.w, s - 1.0);
    row.constant = row.lemma_rhs > 0.0 ? row.lemma_lhs / row.lemma_rhs : 0.0;
    st.rows.push_back(std::move(row));
  }
  return st;
}

IkebeSaitoRow ikebe_saito_check(double nu, double tau, const ScalarField& g, double s, double t,
                                const StaggeredGrid& grid, double delta, int pad) {
  if (!(t < -0.5 && s > 0.5 && s < 1.0))
    throw Error(ErrorCode::BadParameters, fmt::format("need t < -1/2 < 1/2 < s < 1, got t = {}, s = {}", t, s));
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::BadParameters, "tau must lie in (0, 1]");
  if (nu == 0.0) throw Error(ErrorCode::BadParameters, "nu must be nonzero");
  const auto sol = solve_scalar_resolvent(helmholtz_beta2(nu, tau), g, grid, pad);
  ScalarField we(grid.n_cells());
  for (Id c = 0; c < grid.n_cells(); ++c) we[c] = std::exp(cplx(0.0, -nu * grid.cell_center(c).norm())) * sol.w[c];
  auto grad_norm = [&](const ScalarField& v, double wt) {
    const CellVectors gr = scalar_gradient(grid, v);
    double acc = 0.0;
    for (Id c = 0; c < grid.n_cells(); ++c)
      acc += std::pow(1.0 + grid.cell_center(c).squaredNorm(), wt) * gr.row(c).squaredNorm();
    return std::sqrt(acc * std::pow(grid.h(), 3));
  };
  IkebeSaitoRow r;
  r.tau = tau;
  r.w_t = scalar_norm(grid, sol.w, t);
  r.grad_we = grad_norm(we, s - 1.0);
  r.grad_w = grad_norm(sol.w, s - 1.0);
  r.we_h1 = std::hypot(scalar_norm(grid, we, s - 2.0), r.grad_we);
  r.g_s = scalar_norm(grid, g, s);
  r.w_delta = scalar_norm(grid, sol.w, -delta);
  r.lhs = r.w_t + r.we_h1;
  r.rhs = r.g_s + r.w_delta;
  r.c = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  r.phase_ratio = r.grad_w > 0.0 ? r.grad_we / r.grad_w : 0.0;
  const double gn = scalar_norm(grid, g);
  r.bound_ratio = gn > 0.0 ? sol.w_norm_padded * std::abs(nu) * tau / gn : 0.0;
  return r;
}

IkebeSaitoReport ikebe_saito_sweep(double nu, const std::vector<double>& taus, const ScalarField& g, double s,
                                   double t, const StaggeredGrid& grid, double delta, int pad) {
  IkebeSaitoReport rep;
  rep.nu = nu;
  rep.s = s;
  rep.t = t;
  rep.delta = delta;
  std::vector<double> cs;
  for (double tau : taus) {
    rep.rows.push_back(ikebe_saito_check(nu, tau, g, s, t, grid, delta, pad));
    if (rep.rows.back().rhs > 0.0) cs.push_back(rep.rows.back().c);
  }
  if (!cs.empty()) {
    rep.c_max = *std::max_element(cs.begin(), cs.end());
    rep.c_median = median(cs);
    rep.uniform = rep.c_max <= 3.0 * rep.c_median;
  }
  return rep;
}

}  // namespace limabs
