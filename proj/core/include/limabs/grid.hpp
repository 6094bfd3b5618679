// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "limabs/types.hpp"

namespace limabs {

struct AxisBox {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
};

struct ObstacleSpec {
  enum class Kind { None, Sphere, Box, Union };

  Kind kind = Kind::None;
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  // Box uses boxes[0]; Union uses all of them.
  std::vector<AxisBox> boxes;

  static ObstacleSpec none() { return {}; }
  static ObstacleSpec sphere(double radius, const Vec3& center = Vec3::Zero());
  static ObstacleSpec box(const Vec3& lo, const Vec3& hi);
  static ObstacleSpec union_of(std::vector<AxisBox> boxes);

  bool contains(const Vec3& x) const;
  // Largest |x| over the closed shape; 0 for no obstacle.
  double extent() const;
};

enum class Location { Edge, Face, Node, Cell };

// Yee grid on the cube [-L/2, L/2]^3 with L = N h. Cells are voxels of the
// obstacle when their center lies inside the shape. Edge and face ids cover the
// full box; DofMap selects the active subset.
class StaggeredGrid {
 public:
  StaggeredGrid(double h, int n, ObstacleSpec obstacle, double r0);
  // Same checks except N >= 2; for dense brute-force oracles only.
  static StaggeredGrid tiny(double h, int n, ObstacleSpec obstacle, double r0);

  double h() const { return h_; }
  int n() const { return n_; }
  double length() const { return n_ * h_; }
  double r0() const { return r0_; }
  double r_max() const { return 0.5 * n_ * h_; }
  const ObstacleSpec& obstacle() const { return obstacle_; }

  Id n_cells() const { return Id(n_) * n_ * n_; }
  Id n_nodes() const { return Id(n_ + 1) * (n_ + 1) * (n_ + 1); }
  Id n_edges() const { return 3 * Id(n_) * (n_ + 1) * (n_ + 1); }
  Id n_faces() const { return 3 * Id(n_ + 1) * n_ * n_; }
  Id n_masked() const { return n_masked_; }

  Id cell_id(int i, int j, int k) const { return (Id(k) * n_ + j) * n_ + i; }
  Id node_id(int i, int j, int k) const { return (Id(k) * (n_ + 1) + j) * (n_ + 1) + i; }
  // Edge along axis d starting at node (i, j, k).
  Id edge_id(int d, int i, int j, int k) const;
  // Face with normal d whose lowest corner is node (i, j, k).
  Id face_id(int d, int i, int j, int k) const;

  std::array<int, 3> decode_cell(Id id) const;
  std::array<int, 3> decode_node(Id id) const;
  std::array<int, 4> decode_edge(Id id) const;  // {d, i, j, k}
  std::array<int, 4> decode_face(Id id) const;  // {d, i, j, k}

  bool masked(Id cell) const { return mask_[cell] != 0; }
  bool masked(int i, int j, int k) const;  // false outside the box

  Vec3 node_pos(int i, int j, int k) const;
  Vec3 cell_center(Id cell) const;
  Vec3 edge_pos(Id edge) const;
  Vec3 face_pos(Id face) const;

  bool edge_on_outer_boundary(Id edge) const;
  bool face_on_outer_boundary(Id face) const;
  bool node_on_outer_boundary(Id node) const;

  // Faces shared by one masked and one unmasked cell.
  const std::vector<Id>& obstacle_faces() const { return obstacle_faces_; }

  // The (up to two) cells adjacent to a face; -1 where outside the box.
  std::array<Id, 2> face_cells(Id face) const;
  // The four edges bounding a face, ordered for a counterclockwise circulation
  // around the normal: a-edge at p, b-edge at p+e_a, a-edge at p+e_b, b-edge at p.
  std::array<Id, 4> face_edges(Id face) const;
  std::array<Id, 4> face_nodes(Id face) const;
  // The (up to four) cells containing an edge; -1 where outside the box.
  std::array<Id, 4> edge_cells(Id edge) const;

 private:
  StaggeredGrid(double h, int n, ObstacleSpec obstacle, double r0, int min_n);

  double h_;
  int n_;
  double r0_;
  ObstacleSpec obstacle_;
  std::vector<unsigned char> mask_;
  Id n_masked_ = 0;
  std::vector<Id> obstacle_faces_;
};

enum class Label : unsigned char { Gamma1, Gamma2 };

struct BcRule {
  enum class Kind { AllGamma1, AllGamma2, HemisphereZ, Predicate };
  Kind kind = Kind::AllGamma1;
  // Used for Kind::Predicate; receives the face center.
  std::function<std::optional<Label>(const Vec3&)> predicate;

  static BcRule all_gamma1() { return {Kind::AllGamma1, {}}; }
  static BcRule all_gamma2() { return {Kind::AllGamma2, {}}; }
  // z >= 0 is Gamma1, the rest Gamma2.
  static BcRule hemisphere_z() { return {Kind::HemisphereZ, {}}; }
};

struct BoundaryLabeling {
  std::vector<Id> faces;  // obstacle faces of the grid
  std::vector<Label> labels;

  std::size_t count(Label l) const;
};

BoundaryLabeling classify_boundary(const StaggeredGrid& grid, const BcRule& rule);

// Active degrees of freedom after eliminating tangential E on Gamma1 and the
// outer box, normal H on the same faces, and everything inside the obstacle.
class DofMap {
 public:
  DofMap(StaggeredGrid grid, BoundaryLabeling labels);

  const StaggeredGrid& grid() const { return grid_; }
  const BoundaryLabeling& labels() const { return labels_; }
  double h() const { return grid_.h(); }

  Id n_edges() const { return Id(edges_.size()); }
  Id n_faces() const { return Id(faces_.size()); }
  // Nodes carrying potentials grounded on Gamma1 and the outer box.
  Id n_nodes() const { return Id(nodes_.size()); }
  // Unmasked cells.
  Id n_cells() const { return Id(cells_.size()); }

  const std::vector<Id>& edges() const { return edges_; }
  const std::vector<Id>& faces() const { return faces_; }
  const std::vector<Id>& nodes() const { return nodes_; }
  const std::vector<Id>& cells() const { return cells_; }

  // Full id to active index, -1 when eliminated.
  int edge_index(Id edge) const { return edge_index_[edge]; }
  int face_index(Id face) const { return face_index_[face]; }
  int node_index(Id node) const { return node_index_[node]; }
  int cell_index(Id cell) const { return cell_index_[cell]; }

  const std::vector<Vec3>& positions(Location loc) const;

  // Labels per full face id for obstacle faces; nullopt elsewhere.
  std::optional<Label> face_label(Id face) const;

 private:
  StaggeredGrid grid_;
  BoundaryLabeling labels_;
  std::vector<Id> edges_, faces_, nodes_, cells_;
  std::vector<int> edge_index_, face_index_, node_index_, cell_index_;
  std::vector<unsigned char> face_label_;  // 0 none, 1 Gamma1, 2 Gamma2
  std::vector<Vec3> edge_pos_, face_pos_, node_pos_, cell_pos_;
};

// rho(x) = (1 + |x|^2)^(1/2)
inline double rho(const Vec3& x) { return std::sqrt(1.0 + x.squaredNorm()); }

RVec weight_samples(const DofMap& dofs, Location loc, double t);

// (sum_i rho(x_i)^(2t) |f_i|^2 h^3)^(1/2), optionally restricted to a region.
double weighted_norm(const CVec& field, const std::vector<Vec3>& positions, double h, double t,
                     const std::function<bool(const Vec3&)>& region = {});

// Smooth cut-off eta_k(x) = profile(|x| / r_k), r_k = 2^k r0.
struct CutoffFamily {
  double r0 = 1.0;
  double delta = 0.1;

  double profile(double s) const;
  double eta(int k, const Vec3& x) const;
  double eta_check(int k, const Vec3& x) const { return 1.0 - eta(k, x); }
  double radius(int k) const { return std::ldexp(r0, k); }
};

// Cells with center radius in [r - h/2, r + h/2).
bool in_shell(const Vec3& x, double r, double h);

// sum over the discrete sphere S(r) of density * h^2. Throws ShellOutsideDomain
// when r >= r_max.
double shell_sum(const RVec& density, const std::vector<Vec3>& positions, double h, double r,
                 double r_max);
double shell_integral(const CVec& field, const std::vector<Vec3>& positions, double h, double r,
                      double r_max);

}  // namespace limabs
