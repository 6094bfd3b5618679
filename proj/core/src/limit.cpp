// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "limabs/errors.hpp"
#include "limabs/numerics.hpp"

namespace limabs {

cplx schedule_frequency(double omega, double sigma) {
  if (sigma == 0.0) return omega;
  const cplx z = omega * omega + I_UNIT * sigma * omega;
  return sigma > 0.0 ? sqrt_upper(z) : sqrt_lower(z);
}

FrequencySchedule make_schedule(double omega, double sigma0, double ratio, int n_max, int side) {
  if (omega == 0.0 || !std::isfinite(omega)) throw Error(ErrorCode::BadParameters, "schedule.omega must be nonzero");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::BadParameters, "schedule.ratio must be in (0,1)");
  if (!(sigma0 > 0.0)) throw Error(ErrorCode::BadParameters, "schedule.sigma0 must be positive");
  if (n_max < 1) throw Error(ErrorCode::BadParameters, "schedule.n_max must be at least 1");
  if (side != 1 && side != -1) throw Error(ErrorCode::BadParameters, "schedule side must be +1 or -1");
  FrequencySchedule s{omega, sigma0, ratio, n_max, side, {}, {}};
  for (int n = 0; n < n_max; ++n) {
    const double sig = sigma0 * std::pow(ratio, n);
    s.sigma.push_back(sig);
    s.omegas.push_back(schedule_frequency(omega, side * sig));
  }
  return s;
}

TruncationChoice choose_truncation(cplx omega_n, const MaterialField& mat, double support_radius, double tol,
                                   double budget) {
  if (!(omega_n.imag() > 0.0)) throw Error(ErrorCode::BadParameters, "truncation needs Im omega > 0");
  if (!(tol > 0.0 && tol <= 1.0)) throw Error(ErrorCode::BadParameters, "truncation tolerance must be in (0,1]");
  const double rate = omega_n.imag() * std::sqrt(mat.eps0() * mat.mu0());
  TruncationChoice c;
  c.radius = support_radius + std::log(1.0 / tol) / rate;
  if (c.radius > budget) {
    c.radius = budget;
    c.budget_bound = true;
  }
  c.bound = std::exp(-rate * (c.radius - support_radius));
  return c;
}

double weighted_pair_norm(const FieldPair& u, const DofMap& dofs, double t,
                          const std::function<bool(const Vec3&)>& region) {
  const double e = weighted_norm(u.E, dofs.positions(Location::Edge), dofs.h(), t, region);
  const double h = weighted_norm(u.H, dofs.positions(Location::Face), dofs.h(), t, region);
  return std::hypot(e, h);
}

double r_weighted_norm(const MaxwellOperator& op, const FieldPair& u, double t,
                       const std::function<bool(const Vec3&)>& region) {
  const auto& dm = op.dofs();
  // Rot u lives on the dual locations: curl H on edges, curl E on faces.
  const FieldPair r = op.rot(u);
  return std::hypot(weighted_pair_norm(u, dm, t, region), weighted_pair_norm(r, dm, t, region));
}

namespace {

double cell_weighted(const CellPair& v, const StaggeredGrid& g, double t,
                     const std::function<bool(const Vec3&)>& region) {
  double s = 0.0;
  for (Id c = 0; c < g.n_cells(); ++c) {
    if (g.masked(c)) continue;
    const Vec3 x = g.cell_center(c);
    if (region && !region(x)) continue;
    s += std::pow(1.0 + x.squaredNorm(), t) * (v.E.row(c).squaredNorm() + v.H.row(c).squaredNorm());
  }
  const double h = g.h();
  return std::sqrt(s * h * h * h);
}

std::function<bool(const Vec3&)> default_region(const LimitOptions& opts, const StaggeredGrid& g) {
  if (opts.region) return opts.region;
  const AbsorberSpec abs = opts.solver.absorber;
  if (!abs.enabled()) return {};
  return [abs, g](const Vec3& x) { return abs.inside_physical(x, g); };
}

}  // namespace

double radiation_weighted_norm(const FieldPair& u, const DofMap& dofs, double eps0, double mu0, double t,
                               double sign, const std::function<bool(const Vec3&)>& region) {
  const CellPair rf = radiation_functional(dofs.grid(), colocate(dofs, u), eps0, mu0, sign);
  return cell_weighted(rf, dofs.grid(), t, region);
}

LimitRun run_limit(std::shared_ptr<const MaxwellOperator> op, const FrequencySchedule& schedule,
                   const FieldPair& f, const LimitOptions& opts, const KernelBasis* kernel) {
  if (!(opts.monitor_t < -0.5))
    throw Error(ErrorCode::BadParameters,
                fmt::format("monitor weight t = {} must be below -1/2 for radiating limits", opts.monitor_t));
  if (schedule.omegas.empty()) throw Error(ErrorCode::BadParameters, "empty frequency schedule");
  const auto& dm = op->dofs();
  const auto& ops = op->ops();
  const auto region = default_region(opts, dm.grid());

  LimitRun run;
  run.schedule = schedule;
  run.monitor_t = opts.monitor_t;
  run.f = f;
  const double budget = dm.grid().r_max() - (opts.solver.absorber.enabled() ? opts.solver.absorber.cells * dm.h() : 0.0);
  const std::size_t nsteps = schedule.omegas.size();
  for (std::size_t n = 0; n < nsteps; ++n) {
    const cplx w = schedule.omegas[n];
    LimitStep st;
    st.sigma = schedule.sigma[n];
    st.omega = w;
    if (w.imag() > 0.0)
      st.truncation = choose_truncation(w, ops.material(), opts.support_radius, opts.truncation_tol, budget);
    else
      st.truncation = choose_truncation(std::conj(w), ops.material(), opts.support_radius, opts.truncation_tol,
                                        budget);
    ResolventSolver rs(op, w, opts.solver);
    const ResolventSolve sol = rs.solve(f);
    st.rel_residual = sol.rel_residual;
    st.u_lambda = sol.u_norm;
    st.u_monitor = weighted_pair_norm(sol.u, dm, opts.monitor_t, region);
    st.radiation = radiation_weighted_norm(sol.u, dm, ops.eps0(), ops.mu0(), opts.radiation_t,
                                           schedule.side > 0 ? 1.0 : -1.0, region);
    if (kernel != nullptr && sol.u_norm > 0.0)
      for (const auto& v : kernel->vectors)
        st.max_kernel_inner = std::max(st.max_kernel_inner, std::abs(ops.inner(sol.u, v)) / sol.u_norm);
    spdlog::info("limit step {}: sigma = {:.4g}, omega = {:.6f}{:+.6f}i, ||u||_t = {:.6e}", n, st.sigma, w.real(),
                 w.imag(), st.u_monitor);
    run.iterates.push_back(sol.u);
    run.steps.push_back(st);
  }

  for (std::size_t n = 0; n + 1 < nsteps; ++n)
    run.steps[n].gap = weighted_pair_norm(run.iterates[n + 1] - run.iterates[n], dm, opts.monitor_t, region);
  for (std::size_t n = 0; n + 2 < nsteps; ++n) {
    const double g0 = run.steps[n].gap, g1 = run.steps[n + 1].gap;
    run.gap_ratios.push_back(g0 > 0.0 ? g1 / g0 : 0.0);
  }

  const bool zero = std::all_of(run.steps.begin(), run.steps.end(), [](const LimitStep& s) { return s.u_lambda == 0.0; });
  if (zero) {
    run.converged = true;
  } else if (run.gap_ratios.size() >= 3) {
    const auto last = run.gap_ratios.end() - 3;
    double mean = 0.0;
    bool decreasing = true;
    for (auto it = last; it != run.gap_ratios.end(); ++it) {
      mean += *it / 3.0;
      decreasing = decreasing && *it > 0.0 && *it < 1.0;
    }
    run.empirical_ratio = mean;
    run.empirical_order = mean > 0.0 ? std::log(mean) / std::log(schedule.ratio) : 0.0;
    run.converged = decreasing;
  }

  run.limit = run.iterates.back();
  if (opts.richardson && nsteps >= 2) {
    // u(sigma) ~ u* + sigma w through the last two iterates
    const double s1 = schedule.sigma[nsteps - 2], s2 = schedule.sigma[nsteps - 1];
    const FieldPair wv = (1.0 / (s1 - s2)) * (run.iterates[nsteps - 2] - run.iterates[nsteps - 1]);
    run.limit = run.iterates.back() - s2 * wv;
    run.extrapolated = true;
  }
  if (kernel != nullptr)
    for (const auto& v : kernel->vectors) run.kernel_inner.push_back(ops.inner(run.limit, v));

  if (!run.converged && opts.throw_if_not_converged) {
    std::string ratios;
    for (double r : run.gap_ratios) ratios += fmt::format(" {:.3f}", r);
    throw Error(ErrorCode::NotConverged,
                fmt::format("limiting absorption at omega = {} did not settle; gap ratios:{} (a nearby "
                            "kernel candidate or a too short schedule)",
                            schedule.omega, ratios));
  }
  return run;
}

AprioriReport apriori_report(const LimitRun& run, const MaxwellOperator& op, double s, double t, double that,
                             double delta, const std::function<bool(const Vec3&)>& region) {
  if (!(s > 0.5)) throw Error(ErrorCode::BadParameters, "a-priori report needs s > 1/2");
  if (!(t < -0.5)) throw Error(ErrorCode::BadParameters, "a-priori report needs t < -1/2");
  const auto& dm = op.dofs();
  const auto& ops = op.ops();
  AprioriReport rep;
  rep.s = s;
  rep.t = t;
  rep.that = that;
  rep.delta = delta;
  const double fs = weighted_pair_norm(run.f, dm, s, region);
  std::vector<double> cs;
  for (std::size_t n = 0; n < run.iterates.size(); ++n) {
    const FieldPair& u = run.iterates[n];
    AprioriRow row;
    row.n = int(n);
    row.sigma = run.steps[n].sigma;
    row.lhs = r_weighted_norm(op, u, t, region) +
              radiation_weighted_norm(u, dm, ops.eps0(), ops.mu0(), that, run.schedule.side > 0 ? 1.0 : -1.0,
                                      region);
    row.rhs = fs + weighted_pair_norm(u, dm, -delta, region);
    row.defined = row.rhs > 0.0;
    row.c = row.defined ? row.lhs / row.rhs : std::numeric_limits<double>::quiet_NaN();
    if (row.defined) cs.push_back(row.c);
    rep.rows.push_back(row);
  }
  if (!cs.empty()) {
    rep.c_max = *std::max_element(cs.begin(), cs.end());
    rep.c_median = median(cs);
    rep.uniform = rep.c_max <= 3.0 * rep.c_median;
    for (std::size_t n = 0; n < rep.rows.size(); ++n) {
      auto& row = rep.rows[n];
      row.truncation_dominated = row.defined && run.steps[n].truncation.budget_bound && row.c > 3.0 * rep.c_median;
    }
  }
  return rep;
}

namespace {

std::vector<double> default_shells(const StaggeredGrid& g, const std::function<bool(const Vec3&)>& region) {
  // Radii from just outside the obstacle to the largest sphere inside the region.
  double r_lo = std::max(g.obstacle().extent(), g.r0()) + 2.0 * g.h();
  double r_hi = g.r_max() - 2.0 * g.h();
  if (region) {
    while (r_hi > r_lo && !region(Vec3(r_hi, 0.0, 0.0))) r_hi -= g.h();
  }
  std::vector<double> out;
  const int n = 6;
  if (!(r_hi > r_lo)) return out;
  for (int i = 0; i < n; ++i) out.push_back(r_lo * std::pow(r_hi / r_lo, double(i) / (n - 1)));
  return out;
}

RadiatingCertificate certify(const CellPair& u, const StaggeredGrid& g, double eps0, double mu0,
                             const CertificateOptions& opts) {
  RadiatingCertificate c;
  const auto shells = opts.shells.empty() ? default_shells(g, opts.region) : opts.shells;
  if (shells.size() < 2) throw Error(ErrorCode::InsufficientShells, "certificate needs at least two shells");
  c.t_grid = opts.t_grid;
  c.that_grid = opts.that_grid;
  for (double t : opts.t_grid) c.field_norms.push_back(cell_weighted(u, g, t, opts.region));
  const CellPair out = radiation_functional(g, u, eps0, mu0, 1.0);
  const CellPair in = radiation_functional(g, u, eps0, mu0, -1.0);
  for (double t : opts.that_grid) {
    c.outgoing_norms.push_back(cell_weighted(out, g, t, opts.region));
    c.incoming_norms.push_back(cell_weighted(in, g, t, opts.region));
  }
  c.shells = silver_mueller_residual(u, g, eps0, mu0, -0.25, shells, opts.region);
  c.field_slope = c.shells.field_slope;
  c.outgoing_slope = c.shells.outgoing_slope;
  c.incoming_slope = c.shells.incoming_slope;

  const double r_full = shells.back();
  auto within = [&](double r) {
    return [&opts, r](const Vec3& x) { return x.norm() <= r && (!opts.region || opts.region(x)); };
  };
  c.outgoing_half = cell_weighted(out, g, -0.25, within(0.5 * r_full));
  c.outgoing_full = cell_weighted(out, g, -0.25, within(r_full));
  c.incoming_half = cell_weighted(in, g, -0.25, within(0.5 * r_full));
  c.incoming_full = cell_weighted(in, g, -0.25, within(r_full));

  const double field_full = cell_weighted(u, g, -0.25, within(r_full));
  if (field_full == 0.0) {
    c.outgoing_stable = true;
    c.incoming_improved = false;
    c.pass = true;
    return c;
  }
  c.outgoing_stable = c.outgoing_full <= (1.0 + opts.stability_tol) * c.outgoing_half;
  c.incoming_improved = c.incoming_slope <= c.field_slope - opts.min_extra_decay;
  const bool outgoing_improved = c.outgoing_slope <= c.field_slope - opts.min_extra_decay;
  c.pass = outgoing_improved && c.outgoing_stable && !c.incoming_improved;
  return c;
}

}  // namespace

RadiatingCertificate radiating_certificate(const CellPair& u, const StaggeredGrid& grid, double eps0, double mu0,
                                           const CertificateOptions& opts) {
  RadiatingCertificate c = certify(u, grid, eps0, mu0, opts);
  c.equation_residual = std::numeric_limits<double>::quiet_NaN();
  return c;
}

RadiatingCertificate radiating_certificate(const FieldPair& u, const MaxwellOperator& op, double omega,
                                           const FieldPair& f, const CertificateOptions& opts) {
  const auto& dm = op.dofs();
  const auto& ops = op.ops();
  RadiatingCertificate c = certify(colocate(dm, u), dm.grid(), ops.eps0(), ops.mu0(), opts);
  c.equation_residual = ops.norm(apply_shifted(op, omega, u) - f);
  return c;
}

double smooth_cutoff(double r, double r_in, double r_out) {
  if (r <= r_in) return 1.0;
  if (r >= r_out) return 0.0;
  const double tau = (r - r_in) / (r_out - r_in);
  auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = psi(1.0 - tau), b = psi(tau);
  return a / (a + b);
}

ScatteringSource scattering_source(const MaxwellOperator& op, const FieldFn& incident, cplx omega, double r_in,
                                   double r_out) {
  if (!(r_out > r_in && r_in > 0.0)) throw Error(ErrorCode::BadParameters, "cutoff needs 0 < r_in < r_out");
  const auto& dm = op.dofs();
  const auto& g = dm.grid();
  if (!(r_out < g.r_max())) throw Error(ErrorCode::SupportViolation, "cutoff support must stay inside the box");
  if (dm.labels().count(Label::Gamma2) > 0)
    throw Error(ErrorCode::BadParameters, "scattering source supports perfectly conducting (Gamma1) obstacles only");
  FieldFn chi_inc = [&](const Vec3& x) {
    PointField p = incident(x);
    const double chi = smooth_cutoff(x.norm(), r_in, r_out);
    p.E *= chi;
    p.H *= chi;
    return p;
  };
  ScatteringSource s;
  s.lift = sample_dofs(dm, chi_inc);
  s.f = apply_shifted(op, omega, s.lift);
  // The lift also carries tangential E on the eliminated obstacle edges; their
  // curl enters the H rows.
  const double sign[4] = {1.0, 1.0, -1.0, -1.0};
  CVec b = CVec::Zero(dm.n_faces());
  for (Id fi = 0; fi < dm.n_faces(); ++fi) {
    const auto edges = g.face_edges(dm.faces()[fi]);
    for (int q = 0; q < 4; ++q) {
      const Id e = edges[q];
      if (dm.edge_index(e) >= 0 || g.edge_on_outer_boundary(e)) continue;
      const int d = g.decode_edge(e)[0];
      b[fi] += sign[q] / g.h() * chi_inc(g.edge_pos(e)).E[d];
    }
  }
  const double h3 = std::pow(g.h(), 3);
  s.f.H += I_UNIT * h3 * op.ops().solve_h(b);
  return s;
}

}  // namespace limabs
