// Copyright 2026 The swipht-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense helpers shared by the physics modules. Everything here is a
// free function template over Eigen expressions.

#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "swipht/common.hpp"

namespace swipht {

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Fixed-size 2x2 (x) 2x2 product, L factor first.
template <typename Scalar>
Matrix4c<Scalar> kron2(const Matrix2c<Scalar>& left, const Matrix2c<Scalar>& right) {
  Matrix4c<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = left(i, j) * right;
  return out;
}

/// max |A - A^dagger| relative to max |A| (0 for the zero matrix).
template <typename Derived>
double hermiticity_error(const Eigen::MatrixBase<Derived>& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

template <typename Derived>
double unitarity_error(const Eigen::MatrixBase<Derived>& u) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M prod = u.adjoint() * u;
  return (prod - M::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
double min_hermitian_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<M> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Principal square root of a Hermitian positive semidefinite matrix;
/// negative eigenvalues from round-off are clipped to zero.
template <typename Derived>
auto psd_sqrt(const Eigen::MatrixBase<Derived>& a) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<M> es(herm);
  const auto vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  M out = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2 of two density matrices.
template <typename DerivedA, typename DerivedB>
double uhlmann_fidelity(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using M = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M sa = psd_sqrt(a);
  const M inner = sa * b * sa;
  Eigen::SelfAdjointEigenSolver<M> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, tr * tr);
}

}  // namespace swipht
