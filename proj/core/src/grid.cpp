// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/grid.hpp"

#include <algorithm>
#include <queue>

#include <fmt/format.h>

#include "limabs/errors.hpp"

namespace limabs {

ObstacleSpec ObstacleSpec::sphere(double radius, const Vec3& center) {
  ObstacleSpec s;
  s.kind = Kind::Sphere;
  s.radius = radius;
  s.center = center;
  return s;
}

ObstacleSpec ObstacleSpec::box(const Vec3& lo, const Vec3& hi) {
  ObstacleSpec s;
  s.kind = Kind::Box;
  s.boxes.push_back({lo, hi});
  return s;
}

ObstacleSpec ObstacleSpec::union_of(std::vector<AxisBox> boxes) {
  ObstacleSpec s;
  s.kind = Kind::Union;
  s.boxes = std::move(boxes);
  return s;
}

namespace {

bool in_box(const AxisBox& b, const Vec3& x) {
  return (x.array() >= b.lo.array()).all() && (x.array() <= b.hi.array()).all();
}

double box_extent(const AxisBox& b) {
  Vec3 far;
  for (int d = 0; d < 3; ++d) far[d] = std::max(std::abs(b.lo[d]), std::abs(b.hi[d]));
  return far.norm();
}

}  // namespace

bool ObstacleSpec::contains(const Vec3& x) const {
  switch (kind) {
    case Kind::None: return false;
    case Kind::Sphere: return (x - center).norm() < radius;
    case Kind::Box: return !boxes.empty() && in_box(boxes[0], x);
    case Kind::Union:
      return std::any_of(boxes.begin(), boxes.end(), [&](const AxisBox& b) { return in_box(b, x); });
  }
  return false;
}

double ObstacleSpec::extent() const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::Sphere: return center.norm() + radius;
    case Kind::Box: return boxes.empty() ? 0.0 : box_extent(boxes[0]);
    case Kind::Union: {
      double e = 0.0;
      for (const auto& b : boxes) e = std::max(e, box_extent(b));
      return e;
    }
  }
  return 0.0;
}

StaggeredGrid::StaggeredGrid(double h, int n, ObstacleSpec obstacle, double r0)
    : StaggeredGrid(h, n, std::move(obstacle), r0, 8) {}

StaggeredGrid StaggeredGrid::tiny(double h, int n, ObstacleSpec obstacle, double r0) {
  return StaggeredGrid(h, n, std::move(obstacle), r0, 2);
}

StaggeredGrid::StaggeredGrid(double h, int n, ObstacleSpec obstacle, double r0, int min_n)
    : h_(h), n_(n), r0_(r0), obstacle_(std::move(obstacle)) {
  if (!(h > 0.0)) throw Error(ErrorCode::BadParameters, fmt::format("grid.h must be > 0, got {}", h));
  if (n < min_n) throw Error(ErrorCode::BadParameters, fmt::format("grid.N must be >= {}, got {}", min_n, n));
  if (!(r0 > 0.0)) throw Error(ErrorCode::BadParameters, fmt::format("grid.r0 must be > 0, got {}", r0));
  if (!(r_max() > 2.0 * r0)) {
    throw Error(ErrorCode::BadParameters,
                fmt::format("R_max = N*h/2 = {} must exceed 2*r0 = {}", r_max(), 2.0 * r0));
  }
  if (obstacle_.extent() > r0) {
    throw Error(ErrorCode::ObstacleTooLarge,
                fmt::format("obstacle reaches |x| = {} but r0 = {}", obstacle_.extent(), r0));
  }

  mask_.assign(n_cells(), 0);
  for (Id c = 0; c < n_cells(); ++c) {
    if (obstacle_.contains(cell_center(c))) {
      mask_[c] = 1;
      ++n_masked_;
    }
  }

  // Connectivity of the unmasked cells through shared faces.
  if (n_masked_ > 0) {
    std::vector<unsigned char> seen(n_cells(), 0);
    Id start = -1;
    for (Id c = 0; c < n_cells() && start < 0; ++c)
      if (!mask_[c]) start = c;
    std::queue<Id> q;
    q.push(start);
    seen[start] = 1;
    Id reached = 1;
    while (!q.empty()) {
      auto [i, j, k] = decode_cell(q.front());
      q.pop();
      const int nb[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      for (const auto& o : nb) {
        int a = i + o[0], b = j + o[1], c = k + o[2];
        if (a < 0 || b < 0 || c < 0 || a >= n_ || b >= n_ || c >= n_) continue;
        Id id = cell_id(a, b, c);
        if (mask_[id] || seen[id]) continue;
        seen[id] = 1;
        ++reached;
        q.push(id);
      }
    }
    if (reached != n_cells() - n_masked_) {
      throw Error(ErrorCode::DomainDisconnected,
                  fmt::format("{} of {} unmasked cells reachable", reached, n_cells() - n_masked_));
    }
  }

  for (Id f = 0; f < n_faces(); ++f) {
    auto cells = face_cells(f);
    if (cells[0] < 0 || cells[1] < 0) continue;
    if (mask_[cells[0]] != mask_[cells[1]]) obstacle_faces_.push_back(f);
  }
}

Id StaggeredGrid::edge_id(int d, int i, int j, int k) const {
  const Id np = n_ + 1;
  const Id per = Id(n_) * np * np;
  std::array<Id, 3> ext{np, np, np};
  ext[d] = n_;
  return d * per + (Id(k) * ext[1] + j) * ext[0] + i;
}

Id StaggeredGrid::face_id(int d, int i, int j, int k) const {
  const Id np = n_ + 1;
  const Id per = np * n_ * n_;
  std::array<Id, 3> ext{n_, n_, n_};
  ext[d] = np;
  return d * per + (Id(k) * ext[1] + j) * ext[0] + i;
}

std::array<int, 3> StaggeredGrid::decode_cell(Id id) const {
  return {int(id % n_), int((id / n_) % n_), int(id / (Id(n_) * n_))};
}

std::array<int, 3> StaggeredGrid::decode_node(Id id) const {
  const Id np = n_ + 1;
  return {int(id % np), int((id / np) % np), int(id / (np * np))};
}

std::array<int, 4> StaggeredGrid::decode_edge(Id id) const {
  const Id np = n_ + 1;
  const Id per = Id(n_) * np * np;
  int d = int(id / per);
  Id r = id % per;
  std::array<Id, 3> ext{np, np, np};
  ext[d] = n_;
  return {d, int(r % ext[0]), int((r / ext[0]) % ext[1]), int(r / (ext[0] * ext[1]))};
}

std::array<int, 4> StaggeredGrid::decode_face(Id id) const {
  const Id np = n_ + 1;
  const Id per = np * n_ * n_;
  int d = int(id / per);
  Id r = id % per;
  std::array<Id, 3> ext{n_, n_, n_};
  ext[d] = np;
  return {d, int(r % ext[0]), int((r / ext[0]) % ext[1]), int(r / (ext[0] * ext[1]))};
}

bool StaggeredGrid::masked(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_) return false;
  return mask_[cell_id(i, j, k)] != 0;
}

Vec3 StaggeredGrid::node_pos(int i, int j, int k) const {
  const double o = -0.5 * length();
  return {o + i * h_, o + j * h_, o + k * h_};
}

Vec3 StaggeredGrid::cell_center(Id cell) const {
  auto [i, j, k] = decode_cell(cell);
  return node_pos(i, j, k) + Vec3::Constant(0.5 * h_);
}

Vec3 StaggeredGrid::edge_pos(Id edge) const {
  auto [d, i, j, k] = decode_edge(edge);
  Vec3 x = node_pos(i, j, k);
  x[d] += 0.5 * h_;
  return x;
}

Vec3 StaggeredGrid::face_pos(Id face) const {
  auto [d, i, j, k] = decode_face(face);
  Vec3 x = node_pos(i, j, k) + Vec3::Constant(0.5 * h_);
  x[d] -= 0.5 * h_;
  return x;
}

bool StaggeredGrid::edge_on_outer_boundary(Id edge) const {
  auto [d, i, j, k] = decode_edge(edge);
  std::array<int, 3> p{i, j, k};
  for (int a = 0; a < 3; ++a)
    if (a != d && (p[a] == 0 || p[a] == n_)) return true;
  return false;
}

bool StaggeredGrid::face_on_outer_boundary(Id face) const {
  auto [d, i, j, k] = decode_face(face);
  std::array<int, 3> p{i, j, k};
  return p[d] == 0 || p[d] == n_;
}

bool StaggeredGrid::node_on_outer_boundary(Id node) const {
  auto [i, j, k] = decode_node(node);
  for (int v : {i, j, k})
    if (v == 0 || v == n_) return true;
  return false;
}

std::array<Id, 2> StaggeredGrid::face_cells(Id face) const {
  auto [d, i, j, k] = decode_face(face);
  std::array<int, 3> p{i, j, k};
  std::array<Id, 2> out{-1, -1};
  if (p[d] > 0) {
    auto q = p;
    --q[d];
    out[0] = cell_id(q[0], q[1], q[2]);
  }
  if (p[d] < n_) out[1] = cell_id(p[0], p[1], p[2]);
  return out;
}

std::array<Id, 4> StaggeredGrid::face_edges(Id face) const {
  auto [d, i, j, k] = decode_face(face);
  const int a = (d + 1) % 3, b = (d + 2) % 3;
  std::array<int, 3> p{i, j, k};
  auto pa = p, pb = p;
  ++pa[a];
  ++pb[b];
  return {edge_id(a, p[0], p[1], p[2]), edge_id(b, pa[0], pa[1], pa[2]),
          edge_id(a, pb[0], pb[1], pb[2]), edge_id(b, p[0], p[1], p[2])};
}

std::array<Id, 4> StaggeredGrid::face_nodes(Id face) const {
  auto [d, i, j, k] = decode_face(face);
  const int a = (d + 1) % 3, b = (d + 2) % 3;
  std::array<int, 3> p{i, j, k};
  auto pa = p, pb = p, pab = p;
  ++pa[a];
  ++pb[b];
  ++pab[a];
  ++pab[b];
  return {node_id(p[0], p[1], p[2]), node_id(pa[0], pa[1], pa[2]), node_id(pab[0], pab[1], pab[2]),
          node_id(pb[0], pb[1], pb[2])};
}

std::array<Id, 4> StaggeredGrid::edge_cells(Id edge) const {
  auto [d, i, j, k] = decode_edge(edge);
  const int a = (d + 1) % 3, b = (d + 2) % 3;
  std::array<Id, 4> out{-1, -1, -1, -1};
  int slot = 0;
  for (int sa = 0; sa < 2; ++sa) {
    for (int sb = 0; sb < 2; ++sb) {
      std::array<int, 3> q{i, j, k};
      q[a] -= sa;
      q[b] -= sb;
      if (q[a] >= 0 && q[a] < n_ && q[b] >= 0 && q[b] < n_) out[slot] = cell_id(q[0], q[1], q[2]);
      ++slot;
    }
  }
  return out;
}

std::size_t BoundaryLabeling::count(Label l) const {
  return std::size_t(std::count(labels.begin(), labels.end(), l));
}

BoundaryLabeling classify_boundary(const StaggeredGrid& grid, const BcRule& rule) {
  BoundaryLabeling out;
  out.faces = grid.obstacle_faces();
  out.labels.reserve(out.faces.size());
  for (Id f : out.faces) {
    const Vec3 x = grid.face_pos(f);
    switch (rule.kind) {
      case BcRule::Kind::AllGamma1: out.labels.push_back(Label::Gamma1); break;
      case BcRule::Kind::AllGamma2: out.labels.push_back(Label::Gamma2); break;
      case BcRule::Kind::HemisphereZ:
        out.labels.push_back(x.z() >= 0.0 ? Label::Gamma1 : Label::Gamma2);
        break;
      case BcRule::Kind::Predicate: {
        if (!rule.predicate) throw Error(ErrorCode::UnlabeledFace, "boundary rule has no predicate");
        auto l = rule.predicate(x);
        if (!l) {
          throw Error(ErrorCode::UnlabeledFace,
                      fmt::format("no label for face at ({}, {}, {})", x.x(), x.y(), x.z()));
        }
        out.labels.push_back(*l);
        break;
      }
    }
  }
  return out;
}

DofMap::DofMap(StaggeredGrid grid, BoundaryLabeling labels)
    : grid_(std::move(grid)), labels_(std::move(labels)) {
  const auto& g = grid_;
  if (labels_.faces.size() != labels_.labels.size() ||
      labels_.faces.size() != g.obstacle_faces().size()) {
    throw Error(ErrorCode::InconsistentLabeling, "labeling does not match the grid's obstacle faces");
  }
  face_label_.assign(g.n_faces(), 0);
  for (std::size_t n = 0; n < labels_.faces.size(); ++n) {
    if (labels_.faces[n] != g.obstacle_faces()[n]) {
      throw Error(ErrorCode::InconsistentLabeling, "labeling face order differs from the grid");
    }
    face_label_[labels_.faces[n]] = labels_.labels[n] == Label::Gamma1 ? 1 : 2;
  }

  // Everything touched by a Gamma1 face is eliminated.
  std::vector<unsigned char> dead_edge(g.n_edges(), 0), dead_node(g.n_nodes(), 0);
  for (std::size_t n = 0; n < labels_.faces.size(); ++n) {
    if (labels_.labels[n] != Label::Gamma1) continue;
    for (Id e : g.face_edges(labels_.faces[n])) dead_edge[e] = 1;
    for (Id v : g.face_nodes(labels_.faces[n])) dead_node[v] = 1;
  }

  cell_index_.assign(g.n_cells(), -1);
  for (Id c = 0; c < g.n_cells(); ++c) {
    if (g.masked(c)) continue;
    cell_index_[c] = int(cells_.size());
    cells_.push_back(c);
  }

  edge_index_.assign(g.n_edges(), -1);
  for (Id e = 0; e < g.n_edges(); ++e) {
    if (dead_edge[e] || g.edge_on_outer_boundary(e)) continue;
    bool touches = false;
    for (Id c : g.edge_cells(e))
      if (c >= 0 && !g.masked(c)) touches = true;
    if (!touches) continue;
    edge_index_[e] = int(edges_.size());
    edges_.push_back(e);
  }

  face_index_.assign(g.n_faces(), -1);
  for (Id f = 0; f < g.n_faces(); ++f) {
    if (face_label_[f] == 1 || g.face_on_outer_boundary(f)) continue;
    bool touches = false;
    for (Id c : g.face_cells(f))
      if (c >= 0 && !g.masked(c)) touches = true;
    if (!touches) continue;
    face_index_[f] = int(faces_.size());
    faces_.push_back(f);
  }

  // Nodes of unmasked cells, grounded on Gamma1 and the outer box.
  std::vector<unsigned char> live_node(g.n_nodes(), 0);
  for (Id c : cells_) {
    auto [i, j, k] = g.decode_cell(c);
    for (int dz = 0; dz < 2; ++dz)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) live_node[g.node_id(i + dx, j + dy, k + dz)] = 1;
  }
  node_index_.assign(g.n_nodes(), -1);
  for (Id v = 0; v < g.n_nodes(); ++v) {
    if (!live_node[v] || dead_node[v] || g.node_on_outer_boundary(v)) continue;
    node_index_[v] = int(nodes_.size());
    nodes_.push_back(v);
  }

  edge_pos_.reserve(edges_.size());
  for (Id e : edges_) edge_pos_.push_back(g.edge_pos(e));
  face_pos_.reserve(faces_.size());
  for (Id f : faces_) face_pos_.push_back(g.face_pos(f));
  node_pos_.reserve(nodes_.size());
  for (Id v : nodes_) {
    auto [i, j, k] = g.decode_node(v);
    node_pos_.push_back(g.node_pos(i, j, k));
  }
  cell_pos_.reserve(cells_.size());
  for (Id c : cells_) cell_pos_.push_back(g.cell_center(c));
}

const std::vector<Vec3>& DofMap::positions(Location loc) const {
  switch (loc) {
    case Location::Edge: return edge_pos_;
    case Location::Face: return face_pos_;
    case Location::Node: return node_pos_;
    case Location::Cell: return cell_pos_;
  }
  return cell_pos_;
}

std::optional<Label> DofMap::face_label(Id face) const {
  switch (face_label_[face]) {
    case 1: return Label::Gamma1;
    case 2: return Label::Gamma2;
    default: return std::nullopt;
  }
}

RVec weight_samples(const DofMap& dofs, Location loc, double t) {
  const auto& pos = dofs.positions(loc);
  RVec w(Id(pos.size()));
  for (std::size_t n = 0; n < pos.size(); ++n) w[Id(n)] = std::pow(1.0 + pos[n].squaredNorm(), 0.5 * t);
  return w;
}

double weighted_norm(const CVec& field, const std::vector<Vec3>& positions, double h, double t,
                     const std::function<bool(const Vec3&)>& region) {
  if (field.size() != Id(positions.size())) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("field has {} entries, grid location has {}", field.size(), positions.size()));
  }
  double s = 0.0;
  for (std::size_t n = 0; n < positions.size(); ++n) {
    if (region && !region(positions[n])) continue;
    s += std::pow(1.0 + positions[n].squaredNorm(), t) * std::norm(field[Id(n)]);
  }
  return std::sqrt(s * h * h * h);
}

double CutoffFamily::profile(double s) const {
  const double lo = 1.0 + delta, hi = 2.0 - delta;
  if (s <= lo) return 1.0;
  if (s >= hi) return 0.0;
  const double tau = (s - lo) / (hi - lo);
  auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double a = psi(1.0 - tau), b = psi(tau);
  return a / (a + b);
}

double CutoffFamily::eta(int k, const Vec3& x) const { return profile(x.norm() / radius(k)); }

bool in_shell(const Vec3& x, double r, double h) {
  const double rx = x.norm();
  return rx >= r - 0.5 * h && rx < r + 0.5 * h;
}

double shell_sum(const RVec& density, const std::vector<Vec3>& positions, double h, double r,
                 double r_max) {
  if (!(r < r_max)) {
    throw Error(ErrorCode::ShellOutsideDomain, fmt::format("shell radius {} >= R_max {}", r, r_max));
  }
  if (density.size() != Id(positions.size())) {
    throw Error(ErrorCode::DimensionMismatch, "density and positions differ in length");
  }
  double s = 0.0;
  for (std::size_t n = 0; n < positions.size(); ++n)
    if (in_shell(positions[n], r, h)) s += density[Id(n)];
  return s * h * h;
}

double shell_integral(const CVec& field, const std::vector<Vec3>& positions, double h, double r,
                      double r_max) {
  return shell_sum(field.cwiseAbs2(), positions, h, r, r_max);
}

}  // namespace limabs
