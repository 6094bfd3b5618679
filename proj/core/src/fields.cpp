// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/fields.hpp"

#include "limabs/errors.hpp"
#include "limabs/grid.hpp"

namespace limabs {

FieldPair FieldPair::zeros(const DofMap& dofs) { return zeros(dofs.n_edges(), dofs.n_faces()); }

FieldPair FieldPair::zeros(Id n_edges, Id n_faces) {
  return {CVec::Zero(n_edges), CVec::Zero(n_faces)};
}

CVec FieldPair::stacked() const {
  CVec x(size());
  x << E, H;
  return x;
}

FieldPair FieldPair::unstack(const CVec& x, Id n_edges) {
  return {x.head(n_edges), x.tail(x.size() - n_edges)};
}

namespace {
void check_same(const FieldPair& a, const FieldPair& b) {
  if (a.E.size() != b.E.size() || a.H.size() != b.H.size())
    throw Error(ErrorCode::DimensionMismatch, "field pairs live on different dof sets");
}
}  // namespace

FieldPair& FieldPair::operator+=(const FieldPair& o) {
  check_same(*this, o);
  E += o.E;
  H += o.H;
  return *this;
}

FieldPair& FieldPair::operator-=(const FieldPair& o) {
  check_same(*this, o);
  E -= o.E;
  H -= o.H;
  return *this;
}

FieldPair& FieldPair::operator*=(cplx s) {
  E *= s;
  H *= s;
  return *this;
}

FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
FieldPair operator*(cplx s, FieldPair a) { return a *= s; }

}  // namespace limabs
