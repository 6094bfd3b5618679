// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "limabs/decomposition.hpp"
#include "limabs/helmholtz.hpp"
#include "limabs/numerics.hpp"
#include "limabs/resolvent.hpp"

using namespace limabs;

namespace {

StaggeredGrid sphere_grid(int n) { return StaggeredGrid(4.0 / n * 2.0, n, ObstacleSpec::sphere(1.0), 1.5); }

std::shared_ptr<MaxwellOperator> sphere_op(int n) {
  const StaggeredGrid g = sphere_grid(n);
  auto dm = std::make_shared<DofMap>(g, classify_boundary(g, BcRule::hemisphere_z()));
  auto ops = std::make_shared<BlockOperators>(dm, MaterialField::vacuum(g));
  return std::make_shared<MaxwellOperator>(dm, ops);
}

void BM_CurlAssembly(benchmark::State& st) {
  const StaggeredGrid g = sphere_grid(int(st.range(0)));
  const DofMap dm(g, classify_boundary(g, BcRule::hemisphere_z()));
  for (auto _ : st) benchmark::DoNotOptimize(assemble_curl(dm));
}
BENCHMARK(BM_CurlAssembly)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ApplyMaxwell(benchmark::State& st) {
  const auto op = sphere_op(int(st.range(0)));
  std::mt19937_64 rng(1);
  const FieldPair u = random_field(op->dofs().n_edges(), op->dofs().n_faces(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(op->apply(u));
  st.SetItemsProcessed(st.iterations() * u.size());
}
BENCHMARK(BM_ApplyMaxwell)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LambdaAssemblyAnisotropic(benchmark::State& st) {
  const StaggeredGrid g = sphere_grid(int(st.range(0)));
  auto dm = std::make_shared<DofMap>(g, classify_boundary(g, BcRule::hemisphere_z()));
  MaterialSpec spec;
  spec.eps.kind = GammaSpec::Kind::Radial;
  spec.eps.amplitude = 0.5;
  spec.eps.kappa = 2.0;
  spec.eps.radial_projector = true;
  const MaterialField mat = build_material(spec, g);
  for (auto _ : st) benchmark::DoNotOptimize(BlockOperators(dm, mat));
}
BENCHMARK(BM_LambdaAssemblyAnisotropic)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_DirectFactorization(benchmark::State& st) {
  const auto op = sphere_op(int(st.range(0)));
  SolverOptions so;
  so.method = SolverOptions::Method::Direct;
  for (auto _ : st) {
    ResolventSolver rs(op, cplx(1.0, 0.25), so);
    benchmark::DoNotOptimize(rs.reduced());
  }
}
BENCHMARK(BM_DirectFactorization)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_DecomposeEpsilon(benchmark::State& st) {
  const auto op = sphere_op(int(st.range(0)));
  std::mt19937_64 rng(1);
  const CVec f = random_cvec(op->dofs().n_edges(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(helmholtz_decompose(f, op->ops(), Flavor::Epsilon));
}
BENCHMARK(BM_DecomposeEpsilon)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ScalarResolventFft(benchmark::State& st) {
  const int n = int(st.range(0));
  const StaggeredGrid g(8.0 / n, n, ObstacleSpec::none(), 1.0);
  std::mt19937_64 rng(1);
  const ScalarField v = random_cvec(g.n_cells(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(solve_scalar_resolvent(helmholtz_beta2(1.0, 0.5), v, g));
}
BENCHMARK(BM_ScalarResolventFft)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
