// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>

namespace limabs {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<double>;
using CSpMat = Eigen::SparseMatrix<cplx>;
// One row per cell, columns are the x, y, z components.
using CellVectors = Eigen::Matrix<cplx, Eigen::Dynamic, 3>;

using Id = std::int64_t;

inline constexpr cplx I_UNIT{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

}  // namespace limabs
