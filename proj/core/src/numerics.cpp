// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#include "limabs/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace limabs {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

CVec random_cvec(Id n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec v(n);
  for (Id i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    v[i] = {re, im};
  }
  return v;
}

FieldPair random_field(Id n_edges, Id n_faces, std::mt19937_64& rng) {
  FieldPair u;
  u.E = random_cvec(n_edges, rng);
  u.H = random_cvec(n_faces, rng);
  return u;
}

cplx sqrt_upper(cplx z) {
  cplx r = std::sqrt(z);
  return r.imag() < 0.0 ? -r : r;
}

cplx sqrt_lower(cplx z) {
  cplx r = std::sqrt(z);
  return r.imag() > 0.0 ? -r : r;
}

}  // namespace limabs
