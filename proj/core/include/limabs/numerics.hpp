// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "limabs/fields.hpp"

namespace limabs {

// Least-squares slope of log(y) against log(x); entries with y <= 0 are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

// Complex vector with independent standard normal real and imaginary parts.
CVec random_cvec(Id n, std::mt19937_64& rng);
FieldPair random_field(Id n_edges, Id n_faces, std::mt19937_64& rng);

// Principal square root moved into the closed upper (or lower) half plane.
cplx sqrt_upper(cplx z);
cplx sqrt_lower(cplx z);

}  // namespace limabs
