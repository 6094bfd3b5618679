// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "limabs/helmholtz.hpp"
#include "limabs/io/commands.hpp"
#include "limabs/numerics.hpp"

namespace limabs::io {

namespace {

// Fixed small problems; only the seed and the sample count come from the config.
struct Suite {
  std::string name;
  std::vector<Check> checks;

  void at_most(const std::string& what, double v, double limit) {
    checks.push_back({name, what, v, limit, "<=", v <= limit});
  }
  void at_least(const std::string& what, double v, double limit) {
    checks.push_back({name, what, v, limit, ">=", v >= limit});
  }
  void equals(const std::string& what, double v, double want) {
    checks.push_back({name, what, v, want, "==", v == want});
  }
};

std::shared_ptr<MaxwellOperator> small_op(int n, double h, double radius, double r0, const BcRule& rule,
                                          bool aniso) {
  StaggeredGrid g(h, n, ObstacleSpec::sphere(radius), r0);
  auto dm = std::make_shared<DofMap>(g, classify_boundary(g, rule));
  MaterialSpec spec;
  if (aniso) {
    spec.eps.kind = GammaSpec::Kind::Radial;
    spec.eps.amplitude = 0.7;
    spec.eps.kappa = 2.0;
    spec.eps.matrix << 1.0, 0.3, 0.1, 0.3, 0.5, -0.2, 0.1, -0.2, 0.8;
    spec.mu.kind = GammaSpec::Kind::Radial;
    spec.mu.amplitude = 0.4;
    spec.mu.kappa = 2.0;
    spec.mu.radial_projector = true;
  }
  auto ops = std::make_shared<BlockOperators>(dm, build_material(spec, g));
  return std::make_shared<MaxwellOperator>(dm, ops);
}

FieldPair bump(const DofMap& dm) {
  return sample_dofs(dm, [](const Vec3& x) {
    PointField p;
    const double b = smooth_cutoff((x - Vec3(1.8, 0.0, 0.0)).norm(), 0.2, 0.6);
    p.E = CVec3(0.0, b, cplx(0.0, 0.5) * b);
    return p;
  });
}

void operators_suite(Suite& s, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  for (const auto& [label, rule] : {std::pair{"gamma1", BcRule::all_gamma1()},
                                    std::pair{"gamma2", BcRule::all_gamma2()},
                                    std::pair{"hemisphere", BcRule::hemisphere_z()}}) {
    const auto op = small_op(12, 0.3, 0.6, 0.8, rule, true);
    const SpMat cg = op->curl() * assemble_gradient(op->dofs());
    s.equals(fmt::format("curl_grad_{}", label), cg.norm(), 0.0);
    const SpMat dc = assemble_divergence(op->dofs()) * op->curl();
    s.equals(fmt::format("div_curl_{}", label), dc.norm(), 0.0);
    const SpMat r = op->rot_matrix();
    s.equals(fmt::format("rot_skew_{}", label), SpMat(r + SpMat(r.transpose())).norm(), 0.0);
    double sa = 0.0;
    for (int k = 0; k < cfg.verify.samples; ++k) {
      const auto u = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
      const auto v = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
      const cplx a = op->ops().inner(op->apply(u), v), b = op->ops().inner(u, op->apply(v));
      sa = std::max(sa, std::abs(a - b) / std::abs(a));
    }
    s.at_most(fmt::format("self_adjoint_{}", label), sa, 1e-12);
  }
  const auto rep = dense_mini_oracle(3, cfg.seed);
  s.equals("dense_oracle_pass", rep.pass ? 1.0 : 0.0, 1.0);
  s.at_most("dense_resolvent_norm_gap", std::abs(rep.resolvent_norm_svd - rep.resolvent_norm_formula), 1e-8);
}

void resolvent_suite(Suite& s, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const auto op = small_op(12, 0.3, 0.6, 0.8, BcRule::hemisphere_z(), true);
  const cplx w(1.0, 0.5);
  ResolventSolver rs(op, w);
  double res = 0.0, bound = 0.0;
  for (int k = 0; k < cfg.verify.samples; ++k) {
    const auto f = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
    const auto sol = rs.solve(f);
    res = std::max(res, sol.rel_residual);
    bound = std::max(bound, sol.u_norm * w.imag() / sol.f_norm);
  }
  s.at_most("max_rel_residual", res, 1e-9);
  s.at_most("max_bound_ratio", bound, 1.0 + 1e-8);
  const auto probe = resolvent_norm_probe(op, w, cfg.verify.samples, cfg.seed);
  s.at_most("probe_norm_times_im_omega", probe.norm_estimate * w.imag(), 1.0 + 1e-8);
  const auto f = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
  const auto a = rs.solve(f), b = rs.solve_conjugate(f);
  // (M - w)^-1 and (M - conj w)^-1 are adjoint in Lambda
  const auto g = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
  const auto ag = rs.solve_conjugate(g);
  const cplx l = op->ops().inner(a.u, g), r = op->ops().inner(f, ag.u);
  s.at_most("adjoint_identity", std::abs(l - r) / std::abs(l), 1e-9);
  s.at_most("conjugate_residual", b.rel_residual, 1e-9);
}

void limabs_suite(Suite& s, const RunConfig&) {
  const auto op = small_op(12, 0.5, 1.0, 1.2, BcRule::all_gamma1(), false);
  const FieldPair f = bump(op->dofs());
  LimitOptions lo;
  lo.throw_if_not_converged = false;
  const auto run = run_limit(op, make_schedule(1.0, 0.5, 0.5, 5), f, lo);
  double res = 0.0, bound = 0.0;
  const double fn = op->ops().norm(f);
  for (const auto& st : run.steps) {
    res = std::max(res, st.rel_residual);
    bound = std::max(bound, st.u_lambda * st.omega.imag() / fn);
  }
  s.at_most("max_rel_residual", res, 1e-9);
  s.at_most("max_bound_ratio", bound, 1.0 + 1e-8);
  s.at_most("empirical_gap_ratio", run.empirical_ratio, 0.9);
  // approach from below with the flipped source lands on the flipped limit
  const FieldPair ff{f.E.conjugate(), -f.H.conjugate()};
  const auto down = run_limit(op, make_schedule(1.0, 0.5, 0.5, 5, -1), ff, lo);
  const FieldPair flip{run.limit.E.conjugate(), -run.limit.H.conjugate()};
  s.at_most("sign_determinism", op->ops().norm(down.limit - flip) / op->ops().norm(run.limit), 1e-9);
}

void decomposition_suite(Suite& s, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  for (const auto& [label, rule] :
       {std::pair{"gamma1", BcRule::all_gamma1()}, std::pair{"hemisphere", BcRule::hemisphere_z()}}) {
    const auto op = small_op(12, 0.3, 0.6, 0.8, rule, true);
    for (Flavor fl : {Flavor::Epsilon, Flavor::Mu}) {
      const std::string tag = fmt::format("{}_{}", fl == Flavor::Epsilon ? "eps" : "mu", label);
      double orth = 0.0, re = 0.0, div = 0.0, idem = 0.0;
      for (int k = 0; k < cfg.verify.samples; ++k) {
        const Id n = fl == Flavor::Epsilon ? op->dofs().n_edges() : op->dofs().n_faces();
        const auto sp = helmholtz_decompose(random_cvec(n, rng), op->ops(), fl);
        orth = std::max(orth, sp.orthogonality);
        re = std::max(re, sp.reassembly);
        div = std::max(div, sp.divergence);
        idem = std::max(idem, decomposition_idempotence(sp, op->ops()));
      }
      s.at_most("orthogonality_" + tag, orth, 1e-10);
      s.at_most("reassembly_" + tag, re, 1e-12);
      s.at_most("divergence_" + tag, div, 1e-9);
      s.at_most("idempotence_" + tag, idem, 1e-10);
    }
  }
}

void helmholtz_suite(Suite& s, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const StaggeredGrid g(0.25, 16, ObstacleSpec::none(), 0.8);
  double ratio = std::numeric_limits<double>::infinity(), res = 0.0, bound = 0.0;
  for (int k = 0; k < cfg.verify.samples; ++k) {
    const ScalarField w = random_cvec(g.n_cells(), rng);
    ratio = std::min(ratio, h2_regularity_check(w, g).ratio);
    const auto sol = solve_scalar_resolvent(helmholtz_beta2(1.0, 0.5), w, g);
    res = std::max(res, sol.residual);
  }
  ScalarField src(g.n_cells());
  for (Id c = 0; c < g.n_cells(); ++c) src[c] = smooth_cutoff(g.cell_center(c).norm(), 0.0, 1.5);
  const auto sweep = ikebe_saito_sweep(1.0, {1.0, 0.5, 0.25}, src, 0.75, -1.0, g, 1.0, 2);
  for (const auto& row : sweep.rows) bound = std::max(bound, row.bound_ratio);
  s.at_least("h2_ratio_min", ratio, 1.0 - 1e-12);
  s.at_most("resolvent_residual_max", res, 1e-10);
  s.at_most("bound_ratio_max", bound, 1.0 + 1e-10);
  s.at_most("ikebe_saito_spread", sweep.c_median > 0.0 ? sweep.c_max / sweep.c_median : 0.0, 3.0);
}

void oracles_suite(Suite& s, const RunConfig&) {
  MieSolution mie(cplx(1.0, 0.25), 1.0, PlaneWaveSpec{});
  s.at_most("mie_tail", mie.tail(), 1e-12);
  double tan = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double th = std::acos(-1.0 + (k + 0.5) / 25.0), ph = 2.399963 * k;
    const Vec3 n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    const auto f = mie.total(n);
    tan = std::max(tan, (f.E - n.cast<cplx>().dot(f.E) * n.cast<cplx>()).norm());
  }
  s.at_most("mie_tangential_on_sphere", tan, 1e-8);
  MieSolution real(1.0, 1.0, PlaneWaveSpec{});
  s.at_most("optical_theorem",
            std::abs(real.extinction_cross_section() - real.scattering_cross_section()) /
                real.scattering_cross_section(),
            1e-8);
  auto g = [](double r) { return r < 1.0 ? 1.0 - r * r : 0.0; };
  const double d = 3.0;
  // outside the support a radial source acts like a point charge
  const double q = 4.0 * kPi * (1.0 / 3.0 - 1.0 / 5.0);
  const cplx newton = radial_green_convolution(cplx(1e-6, 0.0), g, 1.0, d);
  s.at_most("newton_limit", std::abs(newton + q / (4.0 * kPi * d)) / (q / (4.0 * kPi * d)), 1e-5);
  std::vector<cplx> hn = spherical_hn(3, cplx(2.0, 0.5)), jn = spherical_jn(3, cplx(2.0, 0.5));
  // j_n y_{n-1} - j_{n-1} y_n = 1 / z^2 with y = (h - j) / i
  const cplx z(2.0, 0.5);
  double wr = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const cplx yn = (hn[n] - jn[n]) / I_UNIT, ym = (hn[n - 1] - jn[n - 1]) / I_UNIT;
    wr = std::max(wr, std::abs((jn[n] * ym - jn[n - 1] * yn) * z * z - 1.0));
  }
  s.at_most("bessel_wronskian", wr, 1e-12);
}

using SuiteFn = void (*)(Suite&, const RunConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> t{
      {"operators", operators_suite}, {"resolvent", resolvent_suite},
      {"limabs", limabs_suite},       {"decomposition", decomposition_suite},
      {"helmholtz", helmholtz_suite}, {"oracles", oracles_suite}};
  return t;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, f] : suite_table()) v.push_back(n);
    v.push_back("all");
    return v;
  }();
  return names;
}

std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg) {
  std::vector<Check> out;
  bool found = false;
  for (const auto& [name, fn] : suite_table()) {
    if (suite != "all" && suite != name) continue;
    found = true;
    Suite s{name, {}};
    fn(s, cfg);
    out.insert(out.end(), s.checks.begin(), s.checks.end());
  }
  if (!found) {
    std::string known;
    for (const auto& n : verify_suites()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("", fmt::format("unknown verify suite '{}' (known: {})", suite, known));
  }
  return out;
}

Json verify_json(const std::string& suite, const std::vector<Check>& checks, std::uint64_t seed) {
  Json j;
  j["command"] = "verify";
  j["suite"] = suite;
  j["seed"] = seed;
  int failed = 0;
  Json arr = Json::array();
  for (const auto& c : checks) {
    failed += c.pass ? 0 : 1;
    arr.push_back({{"suite", c.suite},
                   {"name", c.name},
                   {"measured", c.measured},
                   {"relation", c.relation},
                   {"threshold", c.threshold},
                   {"pass", c.pass}});
  }
  j["passed"] = int(checks.size()) - failed;
  j["failed"] = failed;
  j["checks"] = arr;
  return j;
}

CsvTable verify_csv(const std::vector<Check>& checks) {
  CsvTable t;
  t.header = {"suite", "name", "measured", "relation", "threshold", "pass"};
  for (const auto& c : checks) t.add({c.suite, c.name, num(c.measured), c.relation, num(c.threshold), num(c.pass)});
  return t;
}

int cmd_verify(const Context& ctx, const std::string& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = run_suite(suite, ctx.cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int failed = 0;
  for (const auto& c : checks) {
    failed += c.pass ? 0 : 1;
    if (!ctx.quiet || !c.pass)
      fmt::print("{} {}.{}: {:.3e} {} {:.3e}\n", c.pass ? "PASS" : "FAIL", c.suite, c.name, c.measured,
                 c.relation, c.threshold);
  }
  // timings stay out of the files so reruns are byte identical
  if (ctx.cfg.outputs.json) write_json(ctx.path("verify.json"), verify_json(suite, checks, ctx.cfg.seed), ctx.cfg.hash);
  if (ctx.cfg.outputs.csv) write_csv(ctx.path("verify.csv"), verify_csv(checks), ctx.cfg.hash);
  fmt::print("verify {}: {} checks, {} failed, {:.1f} s\n", suite, checks.size(), failed, secs);
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace limabs::io
