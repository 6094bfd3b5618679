// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "limabs/errors.hpp"
#include "limabs/grid.hpp"
#include "limabs/numerics.hpp"

using namespace limabs;

namespace {

Id count_outside(double h, int n, double radius) {
  Id cnt = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Vec3 c(-0.5 * n * h + (i + 0.5) * h, -0.5 * n * h + (j + 0.5) * h, -0.5 * n * h + (k + 0.5) * h);
        if (c.norm() >= radius) ++cnt;
      }
  return cnt;
}

}  // namespace

TEST(Grid, SphereGridMatchesEnumeration) {
  StaggeredGrid g(0.25, 32, ObstacleSpec::sphere(1.0), 1.5);
  EXPECT_DOUBLE_EQ(g.r_max(), 4.0);
  EXPECT_EQ(g.n_cells() - g.n_masked(), count_outside(0.25, 32, 1.0));
  EXPECT_GT(g.n_masked(), 0);
}

TEST(Grid, EmptyObstacleHasNoMaskedCells) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  EXPECT_EQ(g.n_masked(), 0);
  EXPECT_TRUE(g.obstacle_faces().empty());
}

TEST(Grid, ObstacleTooLarge) {
  try {
    StaggeredGrid g(0.25, 32, ObstacleSpec::sphere(3.0), 1.0);
    FAIL() << "expected ObstacleTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ObstacleTooLarge);
  }
}

TEST(Grid, DisconnectedDomainIsRejected) {
  // A closed hollow box shell cuts off its interior.
  std::vector<AxisBox> walls;
  const double a = 1.0, t = 0.3;
  walls.push_back({Vec3(-a, -a, -a), Vec3(a, a, -a + t)});
  walls.push_back({Vec3(-a, -a, a - t), Vec3(a, a, a)});
  walls.push_back({Vec3(-a, -a, -a), Vec3(-a + t, a, a)});
  walls.push_back({Vec3(a - t, -a, -a), Vec3(a, a, a)});
  walls.push_back({Vec3(-a, -a, -a), Vec3(a, -a + t, a)});
  walls.push_back({Vec3(-a, a - t, -a), Vec3(a, a, a)});
  try {
    StaggeredGrid g(0.25, 32, ObstacleSpec::union_of(walls), 1.8);
    FAIL() << "expected DomainDisconnected";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainDisconnected);
  }
}

TEST(Grid, IndexRoundTrip) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  for (Id e = 0; e < g.n_edges(); e += 7) {
    auto [d, i, j, k] = g.decode_edge(e);
    EXPECT_EQ(g.edge_id(d, i, j, k), e);
  }
  for (Id f = 0; f < g.n_faces(); f += 5) {
    auto [d, i, j, k] = g.decode_face(f);
    EXPECT_EQ(g.face_id(d, i, j, k), f);
  }
}

TEST(Labeling, AllGamma1OnSphere) {
  StaggeredGrid g(0.25, 24, ObstacleSpec::sphere(1.0), 1.2);
  auto lab = classify_boundary(g, BcRule::all_gamma1());
  EXPECT_GT(lab.count(Label::Gamma1), 0u);
  EXPECT_EQ(lab.count(Label::Gamma2), 0u);
}

TEST(Labeling, HemisphereSplitsEvenly) {
  StaggeredGrid g(0.25, 24, ObstacleSpec::sphere(1.0), 1.2);
  auto lab = classify_boundary(g, BcRule::hemisphere_z());
  const auto n1 = lab.count(Label::Gamma1), n2 = lab.count(Label::Gamma2);
  EXPECT_EQ(n1 + n2, g.obstacle_faces().size());
  // one layer of z-normal faces is at most the footprint of the sphere
  EXPECT_LE(std::abs(long(n1) - long(n2)), 4 * 24 * 24);
  EXPECT_EQ(n1, n2);
}

TEST(Labeling, EmptyObstacleGivesEmptyLabeling) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  auto lab = classify_boundary(g, BcRule::all_gamma1());
  EXPECT_TRUE(lab.faces.empty());
}

TEST(Labeling, PartialPredicateThrows) {
  StaggeredGrid g(0.25, 24, ObstacleSpec::sphere(1.0), 1.2);
  BcRule rule{BcRule::Kind::Predicate, [](const Vec3& x) -> std::optional<Label> {
                if (x.x() > 0.5) return std::nullopt;
                return Label::Gamma1;
              }};
  try {
    classify_boundary(g, rule);
    FAIL() << "expected UnlabeledFace";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnlabeledFace);
  }
}

TEST(DofMap, Gamma1EliminatesTangentialDofs) {
  StaggeredGrid g(0.25, 24, ObstacleSpec::sphere(1.0), 1.2);
  DofMap d1(g, classify_boundary(g, BcRule::all_gamma1()));
  DofMap d2(g, classify_boundary(g, BcRule::all_gamma2()));
  EXPECT_LT(d1.n_edges(), d2.n_edges());
  EXPECT_LT(d1.n_faces(), d2.n_faces());
  for (Id f : g.obstacle_faces()) {
    EXPECT_LT(d1.face_index(f), 0);
    EXPECT_GE(d2.face_index(f), 0);
    for (Id e : g.face_edges(f)) EXPECT_LT(d1.edge_index(e), 0);
  }
}

TEST(Weights, Samples) {
  StaggeredGrid g(1.0, 8, ObstacleSpec::none(), 0.5);
  DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
  auto w0 = weight_samples(dm, Location::Edge, 0.0);
  EXPECT_TRUE((w0.array() == 1.0).all());

  auto w2 = weight_samples(dm, Location::Edge, 2.0);
  const int e = dm.edge_index(g.edge_id(0, 4, 4, 4));
  ASSERT_GE(e, 0);
  EXPECT_TRUE(dm.positions(Location::Edge)[e].isApprox(Vec3(0.5, 0, 0)));
  EXPECT_NEAR(w2[e], 1.25, 1e-15);

  auto wm = weight_samples(dm, Location::Node, -1.0);
  const int v = dm.node_index(g.node_id(5, 4, 4));
  ASSERT_GE(v, 0);
  EXPECT_NEAR(wm[v], 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Weights, NormExamples) {
  StaggeredGrid g(0.25, 16, ObstacleSpec::none(), 0.5);
  DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
  const auto& pos = dm.positions(Location::Cell);
  CVec zero = CVec::Zero(dm.n_cells());
  EXPECT_EQ(weighted_norm(zero, pos, g.h(), 1.0), 0.0);

  CVec one = CVec::Zero(dm.n_cells());
  one[0] = 1.0;
  for (double t : {-1.0, 0.0, 2.5}) {
    const double expect = std::pow(g.h(), 1.5) * std::pow(1.0 + pos[0].squaredNorm(), 0.5 * t);
    EXPECT_NEAR(weighted_norm(one, pos, g.h(), t), expect, 1e-14);
  }

  CVec shell = CVec::Zero(dm.n_cells());
  for (std::size_t c = 0; c < pos.size(); ++c) {
    const double r = pos[c].norm();
    if (r >= 1.0 && r <= 2.0) shell[Id(c)] = 1.0;
  }
  const double ratio = weighted_norm(shell, pos, g.h(), -1.0) / weighted_norm(shell, pos, g.h(), 0.0);
  EXPECT_GE(ratio, 1.0 / std::sqrt(5.0));
  EXPECT_LE(ratio, 1.0 / std::sqrt(2.0));
}

TEST(Weights, MonotoneInT) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
  std::mt19937_64 rng(3);
  const auto& pos = dm.positions(Location::Edge);
  for (int trial = 0; trial < 20; ++trial) {
    CVec f = random_cvec(dm.n_edges(), rng);
    double prev = 0.0;
    for (double t = -2.0; t <= 2.0; t += 0.5) {
      const double n = weighted_norm(f, pos, g.h(), t);
      EXPECT_GE(n, prev);
      prev = n;
    }
  }
}

TEST(Weights, DimensionMismatch) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
  CVec f = CVec::Zero(3);
  EXPECT_THROW(weighted_norm(f, dm.positions(Location::Edge), g.h(), 0.0), Error);
}

// Weighted interpolation estimate with r~ chosen so that (1+r~^2)^(t-s) <= theta^2.
TEST(Weights, InterpolationEstimate) {
  StaggeredGrid g(0.25, 24, ObstacleSpec::sphere(0.5), 0.75);
  DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
  const auto& pos = dm.positions(Location::Cell);
  std::mt19937_64 rng(11);
  const double t = 0.5, s = 1.5, theta = 0.3, delta = 1.0;
  const double rt = std::sqrt(std::pow(theta * theta, 1.0 / (t - s)) - 1.0);
  ASSERT_LE(std::pow(1 + rt * rt, t - s), theta * theta * (1 + 1e-12));
  const double c = std::pow(1 + rt * rt, 0.5 * (std::max(0.0, t) + delta));
  auto inner = [&](const Vec3& x) { return x.norm() < rt; };
  for (int trial = 0; trial < 100; ++trial) {
    CVec f = random_cvec(dm.n_cells(), rng);
    const double lhs = weighted_norm(f, pos, g.h(), t);
    const double rhs =
        c * weighted_norm(f, pos, g.h(), -delta, inner) + theta * weighted_norm(f, pos, g.h(), s);
    EXPECT_LE(lhs, rhs);
  }
}

TEST(Cutoff, Examples) {
  CutoffFamily cf{1.0, 0.1};
  EXPECT_EQ(cf.eta(0, Vec3::Zero()), 1.0);
  EXPECT_EQ(cf.eta(0, Vec3(2.0, 0, 0)), 0.0);
  EXPECT_EQ(cf.eta(1, Vec3(2.0, 0, 0)), 1.0);
  EXPECT_EQ(cf.eta(0, Vec3(1.1, 0, 0)), 1.0);
  EXPECT_EQ(cf.eta(0, Vec3(1.9, 0, 0)), 0.0);
  for (double r = 0.0; r < 5.0; r += 0.0137) {
    const Vec3 x(r, 0.0, 0.0);
    for (int k = 0; k < 3; ++k) {
      const double e = cf.eta(k, x);
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 1.0);
      EXPECT_EQ(e + cf.eta_check(k, x), 1.0);
    }
  }
}

TEST(Shell, SphereAreaConverges) {
  double prev_err = 0.0;
  for (int n : {16, 32, 64}) {
    const double h = 8.0 / n;
    StaggeredGrid g(h, n, ObstacleSpec::none(), 0.5);
    DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
    const auto& pos = dm.positions(Location::Cell);
    CVec one = CVec::Ones(dm.n_cells());
    CVec inv(dm.n_cells());
    for (std::size_t c = 0; c < pos.size(); ++c) inv[Id(c)] = 1.0 / pos[c].norm();
    const double area = shell_integral(one, pos, h, 2.0, g.r_max());
    // lattice shells fluctuate, so no monotone decrease
    const double err = std::abs(area - 16.0 * std::numbers::pi) / (16.0 * std::numbers::pi);
    EXPECT_LT(err, 0.06) << n;
    prev_err = err;
    const double s = shell_integral(inv, pos, h, 2.0, g.r_max());
    EXPECT_NEAR(s, 4.0 * std::numbers::pi, 0.25 * h * 4.0 * std::numbers::pi);
  }
  EXPECT_LT(prev_err, 0.02);
}

TEST(Shell, ZeroFieldAndOutside) {
  StaggeredGrid g(0.5, 8, ObstacleSpec::none(), 0.5);
  DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
  const auto& pos = dm.positions(Location::Cell);
  CVec zero = CVec::Zero(dm.n_cells());
  EXPECT_EQ(shell_integral(zero, pos, g.h(), 1.0, g.r_max()), 0.0);
  try {
    shell_integral(zero, pos, g.h(), 2.0, g.r_max());
    FAIL() << "expected ShellOutsideDomain";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShellOutsideDomain);
  }
}

TEST(Shell, Additivity) {
  StaggeredGrid g(0.25, 24, ObstacleSpec::sphere(0.5), 0.75);
  DofMap dm(g, classify_boundary(g, BcRule::all_gamma1()));
  const auto& pos = dm.positions(Location::Cell);
  std::mt19937_64 rng(5);
  CVec f = random_cvec(dm.n_cells(), rng);
  for (std::size_t c = 0; c < pos.size(); ++c)
    if (pos[c].norm() >= g.r_max() - g.h()) f[Id(c)] = 0.0;
  double total = 0.0;
  for (double r = 0.5 * g.h(); r < g.r_max(); r += g.h()) total += g.h() * shell_integral(f, pos, g.h(), r, g.r_max());
  const double full = f.squaredNorm() * std::pow(g.h(), 3);
  EXPECT_NEAR(total, full, 1e-12 * full);
}
