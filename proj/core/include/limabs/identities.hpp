// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "limabs/fields.hpp"
#include "limabs/grid.hpp"
#include "limabs/helmholtz.hpp"
#include "limabs/operators.hpp"

namespace limabs {

// <Phi Xi u, Lambda0 u> over the annulus r_hat < r < r_tilde against
// <Psi Rot u, Lambda0 u> + <Psi u, Rot Lambda0 u> over the ball r < r_tilde,
// with phi(s) = (1 + s^2)^t and psi(s) = int_{max(r_hat, s)}^{r_tilde} phi.
// Cell-centre fields, centred-difference Rot, midpoint quadrature.
struct PartialIntegrationReport {
  double t = 0.0, r_hat = 0.0, r_tilde = 0.0;
  cplx lhs{0.0, 0.0}, rhs{0.0, 0.0};
  double difference = 0.0;
  double scale = 0.0;  // integrals of the absolute integrands
  double h = 0.0;
  bool within(double factor) const { return difference <= factor * h * scale; }
};

PartialIntegrationReport partial_integration_identity(const StaggeredGrid& grid, const CellPair& u, double t,
                                                      double r_hat, double r_tilde, double eps0 = 1.0,
                                                      double mu0 = 1.0);

// psi(s) for phi(s) = (1 + s^2)^t, by adaptive quadrature.
double weight_antiderivative(double s, double t, double r_hat, double r_tilde);

// The four radial integration rules for scalar w with 0 outside its support,
// n = 3, over the ball r < r_tilde. Surface integrals use the shell of cells
// within h/2 of the sphere.
struct IntegrationRule {
  int rule = 0;
  double m = 0.0;
  double lhs = 0.0, rhs = 0.0, difference = 0.0, scale = 0.0;
};

std::vector<IntegrationRule> integration_rules(const StaggeredGrid& grid, const ScalarField& w, double m,
                                               double r_tilde);

}  // namespace limabs
