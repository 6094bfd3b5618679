// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <memory>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "limabs/errors.hpp"
#include "limabs/numerics.hpp"
#include "limabs/resolvent.hpp"

using namespace limabs;

namespace {

std::shared_ptr<MaxwellOperator> make_op(int n, double h, ObstacleSpec obs, double r0, BcRule rule,
                                         bool aniso = false) {
  StaggeredGrid g(h, n, std::move(obs), r0);
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

std::shared_ptr<MaxwellOperator> sphere_op(bool aniso = false) {
  return make_op(16, 0.25, ObstacleSpec::sphere(0.6), 0.8, BcRule::hemisphere_z(), aniso);
}

}  // namespace

TEST(Resolvent, RealFrequencyRejected) {
  auto op = sphere_op();
  try {
    ResolventSolver rs(op, cplx(1.0, 0.0));
    FAIL() << "expected SingularAtRealFrequency";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularAtRealFrequency);
  }
}

TEST(Resolvent, ResidualAndBound) {
  for (bool aniso : {false, true}) {
    auto op = sphere_op(aniso);
    std::mt19937_64 rng(3);
    for (cplx w : {cplx(0, 1), cplx(0, 2), cplx(1, 0.5), cplx(-1, 0.25)}) {
      ResolventSolver rs(op, w);
      EXPECT_EQ(rs.reduced(), !aniso);
      for (int t = 0; t < 3; ++t) {
        auto f = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
        auto s = rs.solve(f);
        EXPECT_LE(s.rel_residual, 1e-10);
        EXPECT_LE(s.u_norm, (1 + 1e-8) * s.f_norm / std::abs(w.imag()));
        const FieldPair r = apply_shifted(*op, w, s.u) - f;
        EXPECT_LE(op->ops().norm(r), 1e-9 * s.f_norm);
      }
    }
  }
}

TEST(Resolvent, AdjointIdentity) {
  auto op = sphere_op(true);
  std::mt19937_64 rng(4);
  const cplx w(0.8, 0.3);
  ResolventSolver rs(op, w);
  ResolventSolver rsc(op, std::conj(w));
  for (int t = 0; t < 3; ++t) {
    auto f = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
    auto g = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
    const cplx a = op->ops().inner(rs.solve(f).u, g);
    const cplx b = op->ops().inner(f, rs.solve_conjugate(g).u);
    const cplx b2 = op->ops().inner(f, rsc.solve(g).u);
    EXPECT_LT(std::abs(a - b), 1e-9 * std::abs(a));
    EXPECT_LT(std::abs(b - b2), 1e-9 * std::abs(a));
  }
}

TEST(Resolvent, IterativeMatchesDirect) {
  auto op = sphere_op();
  std::mt19937_64 rng(5);
  auto f = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
  const cplx w(1.0, 0.3);
  SolverOptions it;
  it.method = SolverOptions::Method::Iterative;
  auto a = solve_resolvent(op, w, f);
  auto b = solve_resolvent(op, w, f, 1e-10, it);
  EXPECT_EQ(b.method, "iterative");
  EXPECT_GT(b.iterations, 0);
  EXPECT_LT(op->ops().norm(a.u - b.u), 1e-8 * a.u_norm);
}

TEST(Resolvent, IterativeStagnationReported) {
  auto op = sphere_op();
  std::mt19937_64 rng(5);
  auto f = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
  SolverOptions it;
  it.method = SolverOptions::Method::Iterative;
  it.max_iterations = 2;
  it.restart = 2;
  it.reference_shift = cplx(5.0, 5.0);
  try {
    solve_resolvent(op, cplx(1.0, 0.01), f, 1e-12, it);
    FAIL() << "expected SolverStagnation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SolverStagnation);
  }
}

TEST(Resolvent, ZeroRhs) {
  auto op = sphere_op();
  auto s = solve_resolvent(op, cplx(0.0, 1.0), op->zeros());
  EXPECT_EQ(s.u.coeff_norm(), 0.0);
}

TEST(Probe, NormWithinBound) {
  auto op = sphere_op();
  auto p = resolvent_norm_probe(op, cplx(0, 1), 6);
  EXPECT_LE(p.norm_estimate, 1.0 + 1e-8);
  auto q = resolvent_norm_probe(op, cplx(1, 0.1), 12);
  EXPECT_LE(q.norm_estimate, 10.0 + 1e-8);
  EXPECT_GE(q.norm_estimate, 1.0);
  EXPECT_TRUE(std::isfinite(q.c_emp));
}

TEST(Eigen, CavityFrequencies) {
  auto op = make_op(16, 0.5, ObstacleSpec::none(), 0.5, BcRule::all_gamma1());
  auto kb = eigensolve_near(op, 0.62, 5);
  ASSERT_EQ(kb.pairs.size(), 5u);
  std::vector<double> lam;
  for (const auto& p : kb.pairs) {
    lam.push_back(p.lambda);
    EXPECT_LT(std::abs(p.rq_imag), 1e-10);
    EXPECT_LT(p.residual, 1e-6);
  }
  std::sort(lam.begin(), lam.end());
  const double a = std::numbers::pi * std::sqrt(2.0) / 8.0, b = std::numbers::pi * std::sqrt(3.0) / 8.0;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(lam[i], a, 0.02 * a);
  for (int i = 3; i < 5; ++i) EXPECT_NEAR(lam[i], b, 0.02 * b);
  // box modes fill the domain
  for (const auto& p : kb.pairs) EXPECT_TRUE(p.truncation_artifact);
  EXPECT_TRUE(kb.empty());
}

TEST(Eigen, FarFromSpectrumGivesEmptyBasis) {
  auto op = make_op(16, 0.5, ObstacleSpec::none(), 0.5, BcRule::all_gamma1());
  EigenOptions eo;
  eo.localization_limit = 1e9;
  auto kb = eigensolve_near(op, 0.45, 1, eo);
  ASSERT_EQ(kb.pairs.size(), 1u);
  EXPECT_GT(kb.pairs[0].kernel_residual, kb.kernel_tol);
  EXPECT_TRUE(kb.empty());
}

TEST(Kernel, ProjectOut) {
  auto op = make_op(16, 0.5, ObstacleSpec::none(), 0.5, BcRule::all_gamma1());
  auto kb0 = eigensolve_near(op, 0.5554, 3);
  KernelBasis kb;
  for (const auto& p : kb0.pairs) kb.vectors.push_back(p.v);
  for (std::size_t i = 0; i < kb.vectors.size(); ++i)
    for (std::size_t j = 0; j < kb.vectors.size(); ++j)
      EXPECT_NEAR(std::abs(op->ops().inner(kb.vectors[i], kb.vectors[j])), i == j ? 1.0 : 0.0, 1e-10);
  std::mt19937_64 rng(2);
  auto f = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
  const auto& ops = op->ops();
  EXPECT_EQ((project_out_kernel(f, KernelBasis{}, ops) - f).coeff_norm(), 0.0);
  EXPECT_LT(ops.norm(project_out_kernel(kb.vectors[0], kb, ops)), 1e-12);
  auto r = project_out_kernel(f, kb, ops);
  for (const auto& v : kb.vectors) EXPECT_LT(std::abs(ops.inner(r, v)), 1e-12 * ops.norm(f));
}
