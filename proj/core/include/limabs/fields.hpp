// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "limabs/types.hpp"

namespace limabs {

class DofMap;

// u = (E, H): E on active edges, H on active faces.
struct FieldPair {
  CVec E;
  CVec H;

  static FieldPair zeros(const DofMap& dofs);
  static FieldPair zeros(Id n_edges, Id n_faces);

  Id size() const { return E.size() + H.size(); }
  CVec stacked() const;
  static FieldPair unstack(const CVec& x, Id n_edges);

  FieldPair conj() const { return {E.conjugate(), H.conjugate()}; }
  // Plain Euclidean norm of the coefficients.
  double coeff_norm() const { return std::sqrt(E.squaredNorm() + H.squaredNorm()); }

  FieldPair& operator+=(const FieldPair& o);
  FieldPair& operator-=(const FieldPair& o);
  FieldPair& operator*=(cplx s);
};

FieldPair operator+(FieldPair a, const FieldPair& b);
FieldPair operator-(FieldPair a, const FieldPair& b);
FieldPair operator*(cplx s, FieldPair a);

}  // namespace limabs
