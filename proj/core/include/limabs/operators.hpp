// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "limabs/fields.hpp"
#include "limabs/grid.hpp"
#include "limabs/materials.hpp"

namespace limabs {

// Circulation curl, active edges -> active faces, entries +-1/h.
SpMat assemble_curl(const DofMap& dofs);
// Node potentials (grounded on Gamma1 and the outer box) -> active edges.
SpMat assemble_gradient(const DofMap& dofs);
// Active faces -> unmasked cells, outward flux over h.
SpMat assemble_divergence(const DofMap& dofs);
// Cell potentials -> active faces; masked neighbours across Gamma2 act as zero.
// Equals -divergence^T.
SpMat assemble_dual_gradient(const DofMap& dofs);

// Rot_h = [[0, -C^T], [C, 0]] and M_h = i Lambda^-1 h^3 Rot_h on the active dofs.
class MaxwellOperator {
 public:
  MaxwellOperator(std::shared_ptr<const DofMap> dofs, std::shared_ptr<const BlockOperators> ops);

  const DofMap& dofs() const { return *dofs_; }
  const BlockOperators& ops() const { return *ops_; }
  std::shared_ptr<const DofMap> dofs_ptr() const { return dofs_; }
  std::shared_ptr<const BlockOperators> ops_ptr() const { return ops_; }

  const SpMat& curl() const { return c_; }
  const SpMat& curl_t() const { return ct_; }
  // The block matrix Rot_h (without the h^3 factor).
  SpMat rot_matrix() const;

  FieldPair rot(const FieldPair& u) const;    // (-C^T H, C E)
  FieldPair apply(const FieldPair& u) const;  // M_h u
  FieldPair zeros() const { return FieldPair::zeros(*dofs_); }

 private:
  std::shared_ptr<const DofMap> dofs_;
  std::shared_ptr<const BlockOperators> ops_;
  SpMat c_, ct_;
};

// Averages of edge / face values to every cell center of the full box.
// Eliminated dofs count as zero.
CellVectors colocate_e(const DofMap& dofs, const CVec& e);
CellVectors colocate_h(const DofMap& dofs, const CVec& h);
// Transposes of the averaging maps.
CVec distribute_e(const DofMap& dofs, const CellVectors& c);
CVec distribute_h(const DofMap& dofs, const CellVectors& c);

struct CellPair {
  CellVectors E;
  CellVectors H;
};
CellPair colocate(const DofMap& dofs, const FieldPair& u);

// Xi(E, H) = (-xi x H, xi x E) on colocated fields; zero at |x| = 0.
CellPair xi_cells(const StaggeredGrid& grid, const CellPair& u);
// Colocate, apply Xi, redistribute with the transposed averaging.
FieldPair xi_apply(const FieldPair& u, const DofMap& dofs);

// (Lambda0 + sign sqrt(eps0 mu0) Xi) u at cell centers, sign = +1 outgoing.
CellPair radiation_functional(const StaggeredGrid& grid, const CellPair& u, double eps0, double mu0,
                              double sign);

struct RadiationResidual {
  std::vector<double> radii;
  // Root-mean-square over each discrete shell S(r).
  std::vector<double> field_rms, outgoing_rms, incoming_rms;
  // Shell integrals sum |.|^2 h^2.
  std::vector<double> outgoing_shell, incoming_shell;
  double t = 0.0;
  double field_weighted = 0.0, outgoing_weighted = 0.0, incoming_weighted = 0.0;
  double field_slope = 0.0, outgoing_slope = 0.0, incoming_slope = 0.0;
};

// Per-shell and rho^t-weighted norms of the outgoing and incoming radiation
// functionals over unmasked cells accepted by region.
RadiationResidual silver_mueller_residual(const FieldPair& u, const DofMap& dofs, double eps0,
                                          double mu0, double t, const std::vector<double>& shells,
                                          const std::function<bool(const Vec3&)>& region = {});
// Same on already colocated fields over all cells accepted by region.
RadiationResidual silver_mueller_residual(const CellPair& u, const StaggeredGrid& grid, double eps0,
                                          double mu0, double t, const std::vector<double>& shells,
                                          const std::function<bool(const Vec3&)>& region = {});

void save_matrix_market(const SpMat& m, const std::string& path);

}  // namespace limabs
