// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "limabs/errors.hpp"
#include "limabs/numerics.hpp"
#include "limabs/operators.hpp"

using namespace limabs;

namespace {

struct Setup {
  std::shared_ptr<DofMap> dm;
  std::shared_ptr<BlockOperators> ops;
  std::shared_ptr<MaxwellOperator> m;
};

Setup make(bool aniso, BcRule rule = BcRule::hemisphere_z()) {
  StaggeredGrid g(0.25, 16, ObstacleSpec::sphere(0.6), 0.8);
  auto dm = std::make_shared<DofMap>(g, classify_boundary(g, rule));
  MaterialSpec spec;
  if (aniso) {
    spec.eps.kind = GammaSpec::Kind::Radial;
    spec.eps.amplitude = 0.7;
    spec.eps.kappa = 2.0;
    spec.eps.matrix << 1.0, 0.3, 0.1, 0.3, 0.5, -0.2, 0.1, -0.2, 0.8;
    spec.mu.kind = GammaSpec::Kind::Radial;
    spec.mu.gamma0 = 1.3;
    spec.mu.amplitude = 0.4;
    spec.mu.kappa = 2.0;
    spec.mu.radial_projector = true;
  }
  auto ops = std::make_shared<BlockOperators>(dm, build_material(spec, g));
  return {dm, ops, std::make_shared<MaxwellOperator>(dm, ops)};
}

}  // namespace

TEST(Operators, CurlOfGradientVanishes) {
  for (auto rule : {BcRule::all_gamma1(), BcRule::all_gamma2(), BcRule::hemisphere_z()}) {
    auto s = make(false, rule);
    SpMat cg = s.m->curl() * assemble_gradient(*s.dm);
    EXPECT_EQ(cg.norm(), 0.0);
    SpMat dc = assemble_divergence(*s.dm) * s.m->curl();
    EXPECT_EQ(dc.norm(), 0.0);
  }
}

TEST(Operators, DualGradientIsMinusDivergenceTranspose) {
  auto s = make(false);
  SpMat d = assemble_divergence(*s.dm);
  SpMat g = assemble_dual_gradient(*s.dm);
  EXPECT_EQ(SpMat(g + SpMat(d.transpose())).norm(), 0.0);
}

TEST(Operators, RotIsSkew) {
  auto s = make(false);
  SpMat r = s.m->rot_matrix();
  EXPECT_EQ(SpMat(r + SpMat(r.transpose())).norm(), 0.0);
  EXPECT_EQ(r.rows(), s.dm->n_edges() + s.dm->n_faces());
}

TEST(Operators, CurlStencil) {
  auto s = make(false);
  const SpMat& c = s.m->curl();
  const double h = s.dm->h();
  for (int k = 0; k < c.outerSize(); ++k)
    for (SpMat::InnerIterator it(c, k); it; ++it) EXPECT_DOUBLE_EQ(std::abs(it.value()), 1.0 / h);
}

TEST(Operators, SelfAdjointInLambda) {
  for (bool aniso : {false, true}) {
    auto s = make(aniso);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 5; ++t) {
      auto u = random_field(s.dm->n_edges(), s.dm->n_faces(), rng);
      auto v = random_field(s.dm->n_edges(), s.dm->n_faces(), rng);
      const cplx a = s.ops->inner(s.m->apply(u), v);
      const cplx b = s.ops->inner(u, s.m->apply(v));
      EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a));
      const cplx q = s.ops->inner(s.m->apply(u), u);
      EXPECT_LT(std::abs(q.imag()), 1e-12 * std::abs(q));
    }
  }
}

TEST(Operators, GradientsInKernel) {
  auto s = make(false);
  std::mt19937_64 rng(5);
  CVec phi = random_cvec(s.dm->n_nodes(), rng);
  FieldPair u = s.m->zeros();
  u.E = assemble_gradient(*s.dm).cast<cplx>() * phi;
  EXPECT_GT(u.E.norm(), 0.0);
  EXPECT_LT(s.m->apply(u).coeff_norm(), 1e-12 * u.coeff_norm());
}

TEST(Operators, MismatchedDofsRejected) {
  auto a = make(false);
  auto b = make(false);
  EXPECT_THROW(MaxwellOperator(a.dm, b.ops), Error);
}

TEST(Xi, RadialFieldsVanishAndSquareProjects) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  const Id n = g.n_cells();
  CellPair u{CellVectors(n, 3), CellVectors(n, 3)};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (Id c = 0; c < n; ++c) {
    const Vec3 xi = g.cell_center(c).normalized();
    u.E.row(c) = (cplx(nd(rng), nd(rng)) * xi).transpose();
    u.H.row(c) = (cplx(nd(rng), nd(rng)) * xi).transpose();
  }
  auto z = xi_cells(g, u);
  EXPECT_LT(z.E.norm() + z.H.norm(), 1e-14 * (u.E.norm() + u.H.norm()));

  CellPair w{CellVectors(n, 3), CellVectors(n, 3)};
  for (Id c = 0; c < n; ++c)
    for (int d = 0; d < 3; ++d) {
      w.E(c, d) = cplx(nd(rng), nd(rng));
      w.H(c, d) = cplx(nd(rng), nd(rng));
    }
  auto w2 = xi_cells(g, xi_cells(g, w));
  for (Id c = 0; c < n; ++c) {
    const Vec3 xi = g.cell_center(c).normalized();
    const Eigen::Matrix3cd p = (Mat3::Identity() - xi * xi.transpose()).cast<cplx>();
    const Eigen::Vector3cd e = p * w.E.row(c).transpose();
    const Eigen::Vector3cd hh = p * w.H.row(c).transpose();
    EXPECT_LT((w2.E.row(c).transpose() - e).norm(), 1e-14 * w.E.row(c).norm());
    EXPECT_LT((w2.H.row(c).transpose() - hh).norm(), 1e-14 * w.H.row(c).norm());
  }
}

TEST(Xi, DiscreteMapIsSymmetric) {
  auto s = make(false);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 5; ++t) {
    auto u = random_field(s.dm->n_edges(), s.dm->n_faces(), rng);
    auto v = random_field(s.dm->n_edges(), s.dm->n_faces(), rng);
    auto xu = xi_apply(u, *s.dm), xv = xi_apply(v, *s.dm);
    const cplx a = xu.E.cwiseProduct(v.E).sum() + xu.H.cwiseProduct(v.H).sum();
    const cplx b = xv.E.cwiseProduct(u.E).sum() + xv.H.cwiseProduct(u.H).sum();
    EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a));
  }
}

TEST(Colocation, DistributeIsTranspose) {
  auto s = make(false);
  std::mt19937_64 rng(7);
  auto u = random_field(s.dm->n_edges(), s.dm->n_faces(), rng);
  const Id n = s.dm->grid().n_cells();
  CellVectors c(n, 3);
  std::normal_distribution<double> nd;
  for (Id i = 0; i < n; ++i)
    for (int d = 0; d < 3; ++d) c(i, d) = cplx(nd(rng), nd(rng));
  auto ce = colocate_e(*s.dm, u.E);
  const cplx a = (ce.array() * c.array()).sum();
  const cplx b = distribute_e(*s.dm, c).cwiseProduct(u.E).sum();
  EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a));
  auto ch = colocate_h(*s.dm, u.H);
  const cplx a2 = (ch.array() * c.array()).sum();
  const cplx b2 = distribute_h(*s.dm, c).cwiseProduct(u.H).sum();
  EXPECT_LT(std::abs(a2 - b2), 1e-12 * std::abs(a2));
}

TEST(Colocation, ConstantFieldIsReproducedAwayFromBoundary) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  auto dm = std::make_shared<DofMap>(g, classify_boundary(g, BcRule::all_gamma1()));
  CVec e(dm->n_edges());
  for (Id i = 0; i < dm->n_edges(); ++i) e[i] = g.decode_edge(dm->edges()[i])[0] == 1 ? 1.0 : 0.0;
  auto c = colocate_e(*dm, e);
  const Id mid = g.cell_id(4, 4, 4);
  EXPECT_DOUBLE_EQ(c(mid, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(c(mid, 0).real(), 0.0);
}

TEST(Radiation, ShellOutsideDomainThrows) {
  auto s = make(false);
  auto u = s.m->zeros();
  try {
    silver_mueller_residual(u, *s.dm, 1.0, 1.0, 0.0, {1.0, 5.0});
    FAIL() << "expected ShellOutsideDomain";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShellOutsideDomain);
  }
}
