// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "limabs/errors.hpp"
#include "limabs/identities.hpp"
#include "limabs/limit.hpp"

using namespace limabs;

namespace {

// sum of a few smooth bumps with random centres, radii and complex amplitudes
CellPair random_pair(const StaggeredGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CellPair p{CellVectors::Zero(g.n_cells(), 3), CellVectors::Zero(g.n_cells(), 3)};
  for (int b = 0; b < 4; ++b) {
    const Vec3 c(u(rng), u(rng), u(rng));
    const double rho = 1.5 + 0.5 * u(rng);
    Eigen::RowVector3cd ae, ah;
    for (int d = 0; d < 3; ++d) {
      ae[d] = {u(rng), u(rng)};
      ah[d] = {u(rng), u(rng)};
    }
    for (Id q = 0; q < g.n_cells(); ++q) {
      const double s = smooth_cutoff((g.cell_center(q) - c).norm(), 0.0, rho);
      if (s == 0.0) continue;
      p.E.row(q) += s * ae;
      p.H.row(q) += s * ah;
    }
  }
  return p;
}

// smooth, vanishing near the origin and beyond r = 2.6
ScalarField annulus_field(const StaggeredGrid& g) {
  ScalarField w(g.n_cells());
  for (Id q = 0; q < g.n_cells(); ++q) {
    const Vec3 x = g.cell_center(q);
    const double r = x.norm();
    const double prof = (1.0 - smooth_cutoff(r, 0.3, 0.8)) * smooth_cutoff(r, 1.2, 2.6);
    w[q] = cplx(1.0 + 0.3 * x.x(), 0.5 * x.y() - 0.2) * prof * std::exp(cplx(0.0, 1.3 * r));
  }
  return w;
}

}  // namespace

TEST(PartialIntegration, RandomPairsWithinFiveH) {
  StaggeredGrid g(0.25, 32, ObstacleSpec::none(), 1.0);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const CellPair u = random_pair(g, rng);
    for (double t : {-1.0, 0.0, 1.0}) {
      const auto rep = partial_integration_identity(g, u, t, 1.0, 3.0);
      EXPECT_TRUE(rep.within(5.0)) << trial << " t=" << t << " diff " << rep.difference << " scale " << rep.scale;
      EXPECT_NEAR(rep.lhs.imag(), 0.0, 1e-12 * rep.scale);
    }
  }
}

TEST(PartialIntegration, ConvergesUnderRefinement) {
  std::mt19937_64 rng(4);
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    StaggeredGrid g(8.0 / n, n, ObstacleSpec::none(), 1.0);
    std::mt19937_64 r = rng;
    const auto rep = partial_integration_identity(g, random_pair(g, r), 0.0, 1.0, 3.0, 2.0, 0.5);
    const double rel = rep.difference / rep.scale;
    if (prev > 0.0) EXPECT_GE(prev / rel, 1.8);
    prev = rel;
  }
}

TEST(PartialIntegration, Antiderivative) {
  EXPECT_NEAR(weight_antiderivative(0.0, 0.0, 1.0, 3.0), 2.0, 1e-14);
  EXPECT_NEAR(weight_antiderivative(2.0, 0.0, 1.0, 3.0), 1.0, 1e-14);
  EXPECT_EQ(weight_antiderivative(3.5, 0.0, 1.0, 3.0), 0.0);
  EXPECT_NEAR(weight_antiderivative(0.5, -1.0, 1.0, 3.0), std::atan(3.0) - std::atan(1.0), 1e-12);
}

TEST(PartialIntegration, RejectsBadRadii) {
  StaggeredGrid g(0.5, 16, ObstacleSpec::none(), 1.0);
  const CellPair u{CellVectors::Zero(g.n_cells(), 3), CellVectors::Zero(g.n_cells(), 3)};
  EXPECT_THROW(partial_integration_identity(g, u, 0.0, 2.0, 1.0), Error);
  EXPECT_THROW(partial_integration_identity(g, u, 0.0, 1.0, 40.0), Error);
}

TEST(IntegrationRules, AllFourWithinHalfH) {
  for (double m : {0.0, 1.0, -1.0}) {
    for (int n : {32, 64}) {
      StaggeredGrid g(8.0 / n, n, ObstacleSpec::none(), 1.0);
      const auto rules = integration_rules(g, annulus_field(g), m, 2.0);
      ASSERT_EQ(rules.size(), 4u);
      for (const auto& r : rules) {
        EXPECT_LE(r.difference, 0.5 * g.h() * r.scale) << "rule " << r.rule << " m=" << m;
      }
    }
  }
}
