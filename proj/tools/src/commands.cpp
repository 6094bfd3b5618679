// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/io/commands.hpp"

#include <cmath>
#include <filesystem>
#include <random>

#include <fmt/format.h>

#include "limabs/errors.hpp"
#include "limabs/helmholtz.hpp"
#include "limabs/limit.hpp"
#include "limabs/numerics.hpp"

namespace limabs::io {

std::string Context::path(const std::string& name) const {
  return (std::filesystem::path(out_dir) / (cfg.outputs.prefix + name)).string();
}

namespace {

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json grid_json(const RunConfig& cfg) {
  Json g;
  g["h"] = cfg.grid.h;
  g["n"] = cfg.grid.n;
  g["r0"] = cfg.grid.r0;
  const auto& o = cfg.grid.obstacle;
  switch (o.kind) {
    case ObstacleSpec::Kind::None: g["obstacle"] = "none"; break;
    case ObstacleSpec::Kind::Sphere: g["obstacle"] = fmt::format("sphere r={}", o.radius); break;
    default: g["obstacle"] = "box"; break;
  }
  g["bc"] = cfg.bc_name;
  return g;
}

bool vacuum(const RunConfig& cfg) {
  return cfg.material.eps.kind == GammaSpec::Kind::Vacuum && cfg.material.mu.kind == GammaSpec::Kind::Vacuum;
}

std::function<bool(const Vec3&)> physical_region(const RunConfig& cfg, const StaggeredGrid& g) {
  if (!cfg.solver.absorber.enabled()) return {};
  const AbsorberSpec a = cfg.solver.absorber;
  return [a, &g](const Vec3& x) { return a.inside_physical(x, g); };
}

void say(const Context& ctx, const std::string& s) {
  if (!ctx.quiet) fmt::print("{}\n", s);
}

void write_fields(const Context& ctx, const Model& m, const std::string& name,
                  const std::vector<std::pair<std::string, FieldPair>>& fields) {
  if (!ctx.cfg.outputs.vtk) return;
  std::vector<VtkVectors> vs;
  for (const auto& [label, u] : fields) {
    const CellPair c = colocate(*m.dofs, u);
    vs.push_back({label + "_E", c.E});
    vs.push_back({label + "_H", c.H});
  }
  write_vtk(ctx.path(name), m.dofs->grid(), ctx.cfg.hash, vs);
  say(ctx, fmt::format("wrote {}", ctx.path(name)));
}

void emit(const Context& ctx, const std::string& stem, const Json& record, const CsvTable* table) {
  if (ctx.cfg.outputs.json) {
    write_json(ctx.path(stem + ".json"), record, ctx.cfg.hash);
    say(ctx, fmt::format("wrote {}", ctx.path(stem + ".json")));
  }
  if (table && ctx.cfg.outputs.csv) {
    write_csv(ctx.path(stem + ".csv"), *table, ctx.cfg.hash);
    say(ctx, fmt::format("wrote {}", ctx.path(stem + ".csv")));
  }
}

}  // namespace

Model build_model(const RunConfig& cfg) {
  StaggeredGrid g(cfg.grid.h, cfg.grid.n, cfg.grid.obstacle, cfg.grid.r0);
  Model m;
  m.dofs = std::make_shared<DofMap>(g, classify_boundary(g, cfg.bc));
  m.ops = std::make_shared<BlockOperators>(m.dofs, build_material(cfg.material, g));
  m.op = std::make_shared<MaxwellOperator>(m.dofs, m.ops);
  return m;
}

Source build_source(const Model& m, const RunConfig& cfg, cplx omega) {
  const auto& sc = cfg.source;
  Source s;
  const double eps0 = m.ops->eps0(), mu0 = m.ops->mu0();
  switch (sc.kind) {
    case SourceConfig::Kind::PlaneWave: {
      const PlaneWaveSpec pw = sc.plane_wave;
      auto src = scattering_source(
          *m.op,
          [&](const Vec3& x) { return plane_wave(pw, omega, eps0, mu0, x); },
          omega, sc.r_in, sc.r_out);
      s.f = std::move(src.f);
      s.lift = std::move(src.lift);
      s.support = sc.r_out;
      break;
    }
    case SourceConfig::Kind::Dipole: {
      // minus the dipole as incident field leaves the dipole itself as the scattered part
      DipoleSpec d = sc.dipole;
      d.omega = omega;
      d.eps0 = eps0;
      d.mu0 = mu0;
      auto src = scattering_source(
          *m.op,
          [&](const Vec3& x) {
            PointField p = dipole(d, x);
            return PointField{-p.E, -p.H};
          },
          omega, sc.r_in, sc.r_out);
      s.f = std::move(src.f);
      s.lift = std::move(src.lift);
      s.support = sc.r_out;
      break;
    }
    case SourceConfig::Kind::Bump: {
      const Vec3 c = sc.center;
      const double r1 = sc.radius;
      const CVec3 pol = sc.polarization;
      s.f = sample_dofs(*m.dofs, [&](const Vec3& x) {
        PointField p;
        p.E = smooth_cutoff((x - c).norm(), 0.3 * r1, r1) * pol;
        return p;
      });
      s.lift = m.op->zeros();
      s.support = c.norm() + r1;
      break;
    }
  }
  return s;
}

int cmd_solve(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.omega.imag() == 0.0) {
    if (cfg.schedule.present) return cmd_limit(ctx);
    throw ConfigError(cfg.path, "frequency.omega needs a nonzero imaginary part or a [schedule] table");
  }
  const Model m = build_model(cfg);
  const Source src = build_source(m, cfg, cfg.omega);
  ResolventSolver rs(m.op, cfg.omega, cfg.solver);
  const ResolventSolve sol = rs.solve(src.f);
  const FieldPair scattered = sol.u - src.lift;
  const auto trunc =
      choose_truncation(cfg.omega, m.ops->material(), src.support, cfg.truncation_tol, cfg.truncation_budget);
  const auto region = physical_region(cfg, m.dofs->grid());

  Json j;
  j["command"] = "solve";
  j["grid"] = grid_json(cfg);
  j["omega"] = complex_json(cfg.omega);
  j["method"] = sol.method;
  j["iterations"] = sol.iterations;
  j["rel_residual"] = sol.rel_residual;
  j["f_norm"] = sol.f_norm;
  j["u_norm"] = sol.u_norm;
  j["resolvent_bound_ratio"] = sol.f_norm > 0.0 ? sol.u_norm * std::abs(cfg.omega.imag()) / sol.f_norm : 0.0;
  j["truncation"] = {{"radius", trunc.radius}, {"bound", trunc.bound}, {"budget_bound", trunc.budget_bound}};
  if (cfg.source.kind == SourceConfig::Kind::PlaneWave && vacuum(cfg) &&
      cfg.grid.obstacle.kind == ObstacleSpec::Kind::Sphere && cfg.grid.obstacle.center.norm() == 0.0) {
    const MieSolution mie(cfg.omega, cfg.grid.obstacle.radius, cfg.source.plane_wave, m.ops->eps0(), m.ops->mu0());
    const FieldPair ref = mie_pec_sphere(mie, *m.dofs, MiePart::Scattered);
    const double rn = weighted_pair_norm(ref, *m.dofs, -1.0, region);
    j["mie_rel_error_l2_m1"] = rn > 0.0 ? weighted_pair_norm(scattered - ref, *m.dofs, -1.0, region) / rn : 0.0;
  }

  CsvTable t;
  t.header = {"t", "u_l2t", "u_rt", "f_l2t", "radiation_outgoing", "radiation_incoming"};
  for (double w : {-1.0, -0.75, -0.5, -0.25, 0.0}) {
    t.add({num(w), num(weighted_pair_norm(scattered, *m.dofs, w, region)),
           num(r_weighted_norm(*m.op, scattered, w, region)), num(weighted_pair_norm(src.f, *m.dofs, w, region)),
           num(radiation_weighted_norm(scattered, *m.dofs, m.ops->eps0(), m.ops->mu0(), w, 1.0, region)),
           num(radiation_weighted_norm(scattered, *m.dofs, m.ops->eps0(), m.ops->mu0(), w, -1.0, region))});
  }
  emit(ctx, "solve", j, nullptr);
  if (cfg.outputs.csv) {
    write_csv(ctx.path("norms.csv"), t, cfg.hash);
    say(ctx, fmt::format("wrote {}", ctx.path("norms.csv")));
  }
  write_fields(ctx, m, "solution.vtk", {{"u", sol.u}, {"scattered", scattered}});
  say(ctx, fmt::format("solve: {} residual {:.3e}", sol.method, sol.rel_residual));
  return kExitOk;
}

int cmd_limit(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const Model m = build_model(cfg);
  const auto& s = cfg.schedule;
  const FrequencySchedule sched = make_schedule(cfg.omega.real(), s.sigma0, s.ratio, s.n, s.side);
  // the source is built at the target frequency
  const Source src = build_source(m, cfg, cplx(cfg.omega.real(), 0.0));
  LimitOptions lo;
  lo.monitor_t = cfg.monitor_t;
  lo.solver = cfg.solver;
  lo.richardson = s.richardson;
  lo.support_radius = src.support;
  lo.truncation_tol = cfg.truncation_tol;
  const LimitRun run = run_limit(m.op, sched, src.f, lo);

  CsvTable t;
  const auto ap = apriori_report(run, *m.op);
  t.header = {"n", "sigma", "omega_re", "omega_im", "gap", "radiation_residual", "apriori_c", "rel_residual", "u_lambda",
              "u_monitor", "truncation_radius", "truncation_budget_bound"};
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const auto& st = run.steps[i];
    const double c = i < ap.rows.size() ? ap.rows[i].c : std::nan("");
    t.add({num(int(i)), num(st.sigma), num(st.omega.real()), num(st.omega.imag()), num(st.gap), num(st.radiation),
           num(c), num(st.rel_residual), num(st.u_lambda), num(st.u_monitor), num(st.truncation.radius),
           num(st.truncation.budget_bound)});
  }
  Json j;
  j["command"] = "limit";
  j["grid"] = grid_json(cfg);
  j["omega"] = cfg.omega.real();
  j["schedule"] = {{"sigma0", s.sigma0}, {"ratio", s.ratio}, {"n", s.n}, {"side", s.side}};
  j["monitor_t"] = run.monitor_t;
  j["gap_ratios"] = run.gap_ratios;
  j["empirical_ratio"] = run.empirical_ratio;
  j["empirical_order"] = run.empirical_order;
  j["converged"] = run.converged;
  j["extrapolated"] = run.extrapolated;
  Json rows = Json::array();
  for (const auto& r : ap.rows)
    rows.push_back({{"n", r.n}, {"sigma", r.sigma}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"c", r.defined ? r.c : 0.0},
                    {"defined", r.defined}});
  j["apriori"] = {{"rows", rows}, {"c_max", ap.c_max}, {"c_median", ap.c_median}, {"uniform", ap.uniform}};
  emit(ctx, "limit", j, &t);
  write_fields(ctx, m, "limit.vtk", {{"limit", run.limit - src.lift}});
  say(ctx, fmt::format("limit: ratio {:.3f} converged {}", run.empirical_ratio, run.converged));
  return kExitOk;
}

int cmd_spectrum(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const Model m = build_model(cfg);
  EigenOptions eo;
  eo.localization_limit = cfg.spectrum.localization_limit;
  eo.seed = cfg.seed;
  const KernelBasis kb = eigensolve_near(m.op, cfg.spectrum.omega0, cfg.spectrum.k, eo);
  CsvTable t;
  t.header = {"index", "eigenvalue", "rq_imag", "residual", "kernel_residual", "localization", "truncation_artifact"};
  for (std::size_t i = 0; i < kb.pairs.size(); ++i) {
    const auto& p = kb.pairs[i];
    t.add({num(int(i)), num(p.lambda), num(p.rq_imag), num(p.residual), num(p.kernel_residual), num(p.localization),
           num(p.truncation_artifact)});
  }
  Json j;
  j["command"] = "spectrum";
  j["grid"] = grid_json(cfg);
  j["omega0"] = cfg.spectrum.omega0;
  j["pairs"] = int(kb.pairs.size());
  j["kernel_dimension"] = int(kb.vectors.size());
  j["kernel_tol"] = kb.kernel_tol;
  double max_imag = 0.0;
  for (const auto& p : kb.pairs) max_imag = std::max(max_imag, std::abs(p.rq_imag));
  j["max_abs_rq_imag"] = max_imag;
  emit(ctx, "spectrum", j, &t);
  if (!kb.pairs.empty()) write_fields(ctx, m, "spectrum.vtk", {{"mode0", kb.pairs.front().v}});
  say(ctx, fmt::format("spectrum: {} pairs near {}", kb.pairs.size(), cfg.spectrum.omega0));
  return kExitOk;
}

int cmd_decompose(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const Model m = build_model(cfg);
  std::mt19937_64 rng(cfg.seed);
  const bool eps = cfg.flavor == Flavor::Epsilon;
  const CVec field = random_cvec(eps ? m.dofs->n_edges() : m.dofs->n_faces(), rng);
  const HelmholtzSplit sp = helmholtz_decompose(field, *m.ops, cfg.flavor);
  const double idem = decomposition_idempotence(sp, *m.ops);
  Json j;
  j["command"] = "decompose";
  j["grid"] = grid_json(cfg);
  j["flavor"] = eps ? "epsilon" : "mu";
  j["orthogonality"] = sp.orthogonality;
  j["reassembly"] = sp.reassembly;
  j["divergence"] = sp.divergence;
  j["idempotence"] = idem;
  j["cg_iterations"] = sp.cg_iterations;
  CsvTable t;
  t.header = {"flavor", "orthogonality", "reassembly", "divergence", "idempotence", "cg_iterations"};
  t.add({eps ? "epsilon" : "mu", num(sp.orthogonality), num(sp.reassembly), num(sp.divergence), num(idem),
         num(sp.cg_iterations)});
  emit(ctx, "decompose", j, &t);
  if (cfg.outputs.vtk) {
    auto co = [&](const CVec& v) { return eps ? colocate_e(*m.dofs, v) : colocate_h(*m.dofs, v); };
    write_vtk(ctx.path("decompose.vtk"), m.dofs->grid(), cfg.hash,
              {{"field", co(field)}, {"gradient", co(sp.gradient)}, {"remainder", co(sp.remainder)}});
    say(ctx, fmt::format("wrote {}", ctx.path("decompose.vtk")));
  }
  say(ctx, fmt::format("decompose: orthogonality {:.2e} idempotence {:.2e}", sp.orthogonality, idem));
  return kExitOk;
}

int cmd_helmholtz(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& hz = cfg.helmholtz;
  const StaggeredGrid g(cfg.grid.h, cfg.grid.n, ObstacleSpec::none(), cfg.grid.r0);
  const double r1 = hz.source_radius;
  ScalarField src(g.n_cells());
  for (Id c = 0; c < g.n_cells(); ++c) src[c] = smooth_cutoff(g.cell_center(c).norm(), 0.0, r1);
  const auto sweep = ikebe_saito_sweep(hz.nu, hz.taus, src, hz.s, hz.t, g);
  CsvTable t;
  t.header = {"tau", "residual", "bound_ratio", "h2_ratio", "lhs", "rhs", "c_emp", "phase_ratio"};
  ScalarField last;
  for (const auto& row : sweep.rows) {
    const auto sol = solve_scalar_resolvent(helmholtz_beta2(hz.nu, row.tau), src, g);
    const auto h2 = h2_regularity_check(sol.w, g);
    t.add({num(row.tau), num(sol.residual), num(row.bound_ratio), num(h2.ratio), num(row.lhs), num(row.rhs),
           num(row.c), num(row.phase_ratio)});
    last = sol.w;
  }
  Json j;
  j["command"] = "helmholtz";
  j["grid"] = grid_json(cfg);
  j["nu"] = hz.nu;
  j["s"] = hz.s;
  j["t"] = hz.t;
  j["c_max"] = sweep.c_max;
  j["c_median"] = sweep.c_median;
  j["uniform"] = sweep.uniform;
  if (hz.decay_study) {
    const auto st = scalar_decay_study(
        hz.nu, hz.taus, [r1](const Vec3& x) { return cplx(smooth_cutoff(x.norm(), 0.0, r1)); }, g, hz.s);
    Json rows = Json::array();
    for (const auto& r : st.rows)
      rows.push_back({{"tau", r.tau},
                      {"largest_stable_t_h2", r.largest_stable_t},
                      {"largest_stable_t_l2", r.largest_stable_t_l2},
                      {"lemma_constant", r.constant},
                      {"h2_norms", r.h2_norms},
                      {"h2_norms_large", r.h2_norms_large},
                      {"l2_norms", r.l2_norms},
                      {"l2_norms_large", r.l2_norms_large}});
    j["decay"] = {{"t_grid", st.t_grid}, {"rows", rows}};
  }
  emit(ctx, "helmholtz", j, &t);
  if (cfg.outputs.vtk) {
    write_vtk(ctx.path("helmholtz.vtk"), g, cfg.hash, {}, {{"w", last}, {"g", src}});
    say(ctx, fmt::format("wrote {}", ctx.path("helmholtz.vtk")));
  }
  say(ctx, fmt::format("helmholtz: c_max {:.3f} c_median {:.3f}", sweep.c_max, sweep.c_median));
  return kExitOk;
}

int report_error(const std::exception& e) {
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) {
    fmt::print(stderr, "config error: {}\n", ce->what());
    return kExitConfig;
  }
  if (const auto* le = dynamic_cast<const Error*>(&e)) {
    if (is_solver_error(le->code())) {
      fmt::print(stderr, "solver error: {}\n", le->what());
      return kExitSolver;
    }
    fmt::print(stderr, "invalid input: {}\n", le->what());
    return kExitConfig;
  }
  fmt::print(stderr, "error: {}\n", e.what());
  return kExitSolver;
}

}  // namespace limabs::io
