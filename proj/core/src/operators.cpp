// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/operators.hpp"

#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/SparseExtra>

#include "limabs/errors.hpp"
#include "limabs/numerics.hpp"

namespace limabs {

SpMat assemble_curl(const DofMap& dm) {
  const auto& g = dm.grid();
  const double s = 1.0 / g.h();
  const double sign[4] = {s, s, -s, -s};
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dm.faces().size() * 4);
  for (std::size_t fi = 0; fi < dm.faces().size(); ++fi) {
    const auto edges = g.face_edges(dm.faces()[fi]);
    for (int q = 0; q < 4; ++q) {
      const int ei = dm.edge_index(edges[q]);
      if (ei >= 0) trip.emplace_back(int(fi), ei, sign[q]);
    }
  }
  SpMat c(dm.n_faces(), dm.n_edges());
  c.setFromTriplets(trip.begin(), trip.end());
  return c;
}

SpMat assemble_gradient(const DofMap& dm) {
  const auto& g = dm.grid();
  const double s = 1.0 / g.h();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dm.edges().size() * 2);
  for (std::size_t ei = 0; ei < dm.edges().size(); ++ei) {
    auto [d, i, j, k] = g.decode_edge(dm.edges()[ei]);
    std::array<int, 3> p{i, j, k};
    const int a = dm.node_index(g.node_id(p[0], p[1], p[2]));
    ++p[d];
    const int b = dm.node_index(g.node_id(p[0], p[1], p[2]));
    if (a >= 0) trip.emplace_back(int(ei), a, -s);
    if (b >= 0) trip.emplace_back(int(ei), b, s);
  }
  SpMat gr(dm.n_edges(), dm.n_nodes());
  gr.setFromTriplets(trip.begin(), trip.end());
  return gr;
}

SpMat assemble_divergence(const DofMap& dm) {
  const auto& g = dm.grid();
  const double s = 1.0 / g.h();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dm.cells().size() * 6);
  for (std::size_t ci = 0; ci < dm.cells().size(); ++ci) {
    auto [i, j, k] = g.decode_cell(dm.cells()[ci]);
    for (int d = 0; d < 3; ++d) {
      std::array<int, 3> p{i, j, k};
      const int lo = dm.face_index(g.face_id(d, p[0], p[1], p[2]));
      ++p[d];
      const int hi = dm.face_index(g.face_id(d, p[0], p[1], p[2]));
      if (lo >= 0) trip.emplace_back(int(ci), lo, -s);
      if (hi >= 0) trip.emplace_back(int(ci), hi, s);
    }
  }
  SpMat dv(dm.n_cells(), dm.n_faces());
  dv.setFromTriplets(trip.begin(), trip.end());
  return dv;
}

SpMat assemble_dual_gradient(const DofMap& dm) {
  SpMat gd = -SpMat(assemble_divergence(dm).transpose());
  return gd;
}

MaxwellOperator::MaxwellOperator(std::shared_ptr<const DofMap> dofs,
                                 std::shared_ptr<const BlockOperators> ops)
    : dofs_(std::move(dofs)), ops_(std::move(ops)) {
  if (&ops_->dofs() != dofs_.get())
    throw Error(ErrorCode::InconsistentLabeling, "material operators were built on another dof map");
  c_ = assemble_curl(*dofs_);
  ct_ = c_.transpose();
}

SpMat MaxwellOperator::rot_matrix() const {
  const Id ne = dofs_->n_edges(), nf = dofs_->n_faces();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * c_.nonZeros());
  for (int col = 0; col < c_.outerSize(); ++col) {
    for (SpMat::InnerIterator it(c_, col); it; ++it) {
      trip.emplace_back(int(ne + it.row()), int(it.col()), it.value());
      trip.emplace_back(int(it.col()), int(ne + it.row()), -it.value());
    }
  }
  SpMat r(ne + nf, ne + nf);
  r.setFromTriplets(trip.begin(), trip.end());
  return r;
}

FieldPair MaxwellOperator::rot(const FieldPair& u) const {
  if (u.E.size() != dofs_->n_edges() || u.H.size() != dofs_->n_faces())
    throw Error(ErrorCode::DimensionMismatch, "field does not match the operator's dofs");
  return {-(ct_ * u.H), c_ * u.E};
}

FieldPair MaxwellOperator::apply(const FieldPair& u) const {
  const double h3 = std::pow(dofs_->h(), 3);
  FieldPair r = rot(u);
  r.E *= I_UNIT * h3;
  r.H *= I_UNIT * h3;
  return ops_->solve(r);
}

namespace {

template <class Fn>
void for_each_cell(const StaggeredGrid& g, Fn&& fn) {
  const int n = g.n();
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) fn(g.cell_id(i, j, k), i, j, k);
}

// The four edges of axis d around cell (i, j, k).
std::array<Id, 4> cell_edges(const StaggeredGrid& g, int d, int i, int j, int k) {
  std::array<Id, 4> out;
  int slot = 0;
  const int a = (d + 1) % 3, b = (d + 2) % 3;
  for (int sb = 0; sb < 2; ++sb)
    for (int sa = 0; sa < 2; ++sa) {
      std::array<int, 3> p{i, j, k};
      p[a] += sa;
      p[b] += sb;
      out[slot++] = g.edge_id(d, p[0], p[1], p[2]);
    }
  return out;
}

std::array<Id, 2> cell_faces(const StaggeredGrid& g, int d, int i, int j, int k) {
  std::array<int, 3> p{i, j, k};
  const Id lo = g.face_id(d, p[0], p[1], p[2]);
  ++p[d];
  return {lo, g.face_id(d, p[0], p[1], p[2])};
}

}  // namespace

CellVectors colocate_e(const DofMap& dm, const CVec& e) {
  const auto& g = dm.grid();
  if (e.size() != dm.n_edges()) throw Error(ErrorCode::DimensionMismatch, "edge field size");
  CellVectors out = CellVectors::Zero(g.n_cells(), 3);
  for_each_cell(g, [&](Id c, int i, int j, int k) {
    for (int d = 0; d < 3; ++d) {
      cplx s = 0.0;
      for (Id id : cell_edges(g, d, i, j, k)) {
        const int a = dm.edge_index(id);
        if (a >= 0) s += e[a];
      }
      out(c, d) = 0.25 * s;
    }
  });
  return out;
}

CellVectors colocate_h(const DofMap& dm, const CVec& h) {
  const auto& g = dm.grid();
  if (h.size() != dm.n_faces()) throw Error(ErrorCode::DimensionMismatch, "face field size");
  CellVectors out = CellVectors::Zero(g.n_cells(), 3);
  for_each_cell(g, [&](Id c, int i, int j, int k) {
    for (int d = 0; d < 3; ++d) {
      cplx s = 0.0;
      for (Id id : cell_faces(g, d, i, j, k)) {
        const int a = dm.face_index(id);
        if (a >= 0) s += h[a];
      }
      out(c, d) = 0.5 * s;
    }
  });
  return out;
}

CVec distribute_e(const DofMap& dm, const CellVectors& cv) {
  const auto& g = dm.grid();
  CVec out = CVec::Zero(dm.n_edges());
  for_each_cell(g, [&](Id c, int i, int j, int k) {
    for (int d = 0; d < 3; ++d)
      for (Id id : cell_edges(g, d, i, j, k)) {
        const int a = dm.edge_index(id);
        if (a >= 0) out[a] += 0.25 * cv(c, d);
      }
  });
  return out;
}

CVec distribute_h(const DofMap& dm, const CellVectors& cv) {
  const auto& g = dm.grid();
  CVec out = CVec::Zero(dm.n_faces());
  for_each_cell(g, [&](Id c, int i, int j, int k) {
    for (int d = 0; d < 3; ++d)
      for (Id id : cell_faces(g, d, i, j, k)) {
        const int a = dm.face_index(id);
        if (a >= 0) out[a] += 0.5 * cv(c, d);
      }
  });
  return out;
}

CellPair colocate(const DofMap& dm, const FieldPair& u) {
  return {colocate_e(dm, u.E), colocate_h(dm, u.H)};
}

namespace {

Eigen::Vector3cd row3(const CellVectors& m, Id c) { return m.row(c).transpose(); }

// Eigen's cross conjugates complex results, so spell it out.
Eigen::Vector3cd cross_rc(const Vec3& a, const Eigen::Vector3cd& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

}  // namespace

CellPair xi_cells(const StaggeredGrid& g, const CellPair& u) {
  CellPair out{CellVectors::Zero(u.E.rows(), 3), CellVectors::Zero(u.H.rows(), 3)};
  for (Id c = 0; c < g.n_cells(); ++c) {
    const Vec3 x = g.cell_center(c);
    const double r = x.norm();
    if (r == 0.0) continue;
    const Vec3 xi = x / r;
    out.E.row(c) = (-cross_rc(xi, row3(u.H, c))).transpose();
    out.H.row(c) = cross_rc(xi, row3(u.E, c)).transpose();
  }
  return out;
}

FieldPair xi_apply(const FieldPair& u, const DofMap& dm) {
  const CellPair x = xi_cells(dm.grid(), colocate(dm, u));
  return {distribute_e(dm, x.E), distribute_h(dm, x.H)};
}

CellPair radiation_functional(const StaggeredGrid& g, const CellPair& u, double eps0, double mu0,
                              double sign) {
  const CellPair x = xi_cells(g, u);
  const double s = sign * std::sqrt(eps0 * mu0);
  return {eps0 * u.E + s * x.E, mu0 * u.H + s * x.H};
}

RadiationResidual silver_mueller_residual(const CellPair& u, const StaggeredGrid& g, double eps0,
                                          double mu0, double t, const std::vector<double>& shells,
                                          const std::function<bool(const Vec3&)>& region) {
  const CellPair out = radiation_functional(g, u, eps0, mu0, 1.0);
  const CellPair in = radiation_functional(g, u, eps0, mu0, -1.0);
  RadiationResidual rep;
  rep.radii = shells;
  rep.t = t;
  const double h = g.h();
  const double h3 = h * h * h;
  const std::size_t ns = shells.size();
  std::vector<double> sf(ns, 0.0), so(ns, 0.0), si(ns, 0.0);
  std::vector<int> count(ns, 0);
  double wf = 0, wo = 0, wi = 0;
  for (const double r : shells)
    if (!(r < g.r_max()))
      throw Error(ErrorCode::ShellOutsideDomain, fmt::format("shell radius {} >= R_max {}", r, g.r_max()));
  for (Id c = 0; c < g.n_cells(); ++c) {
    if (g.masked(c)) continue;
    const Vec3 x = g.cell_center(c);
    if (region && !region(x)) continue;
    const double f2 = u.E.row(c).squaredNorm() + u.H.row(c).squaredNorm();
    const double o2 = out.E.row(c).squaredNorm() + out.H.row(c).squaredNorm();
    const double i2 = in.E.row(c).squaredNorm() + in.H.row(c).squaredNorm();
    const double w = std::pow(1.0 + x.squaredNorm(), t);
    wf += w * f2;
    wo += w * o2;
    wi += w * i2;
    for (std::size_t s = 0; s < ns; ++s) {
      if (!in_shell(x, shells[s], h)) continue;
      sf[s] += f2;
      so[s] += o2;
      si[s] += i2;
      ++count[s];
    }
  }
  rep.field_weighted = std::sqrt(wf * h3);
  rep.outgoing_weighted = std::sqrt(wo * h3);
  rep.incoming_weighted = std::sqrt(wi * h3);
  for (std::size_t s = 0; s < ns; ++s) {
    const double n = std::max(count[s], 1);
    rep.field_rms.push_back(std::sqrt(sf[s] / n));
    rep.outgoing_rms.push_back(std::sqrt(so[s] / n));
    rep.incoming_rms.push_back(std::sqrt(si[s] / n));
    rep.outgoing_shell.push_back(so[s] * h * h);
    rep.incoming_shell.push_back(si[s] * h * h);
  }
  rep.field_slope = loglog_slope(shells, rep.field_rms);
  rep.outgoing_slope = loglog_slope(shells, rep.outgoing_rms);
  rep.incoming_slope = loglog_slope(shells, rep.incoming_rms);
  return rep;
}

RadiationResidual silver_mueller_residual(const FieldPair& u, const DofMap& dm, double eps0,
                                          double mu0, double t, const std::vector<double>& shells,
                                          const std::function<bool(const Vec3&)>& region) {
  return silver_mueller_residual(colocate(dm, u), dm.grid(), eps0, mu0, t, shells, region);
}

void save_matrix_market(const SpMat& m, const std::string& path) {
  if (!Eigen::saveMarket(m, path)) throw Error(ErrorCode::BadConfig, "cannot write " + path);
}

}  // namespace limabs
