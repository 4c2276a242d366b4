// Copyright 2026 The zenochain Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace zenochain {

using Index = Eigen::Index;

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using ComplexMatrix = Matrix<Complex<Real>>;

template <typename Real>
using ComplexVector = Vector<Complex<Real>>;

// Row-stacking vectorization: element (i, j) of a D x D matrix lands at i*D + j.
constexpr Index vec_index(Index row, Index col, Index dim) noexcept {
  return row * dim + col;
}

template <typename Derived>
Vector<typename Derived::Scalar> vectorize(const Eigen::MatrixBase<Derived>& m) {
  const Index d = m.rows();
  Vector<typename Derived::Scalar> v(d * m.cols());
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < m.cols(); ++j) v(vec_index(i, j, m.cols())) = m(i, j);
  return v;
}

template <typename Derived>
Matrix<typename Derived::Scalar> unvectorize(const Eigen::MatrixBase<Derived>& v, Index dim) {
  Matrix<typename Derived::Scalar> m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) m(i, j) = v(vec_index(i, j, dim));
  return m;
}

/// Largest absolute entry; the max-norm used by every tolerance check here.
template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  using std::abs;
  return m.size() == 0 ? decltype(abs(m(0, 0))){0} : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
auto hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

template <typename Derived>
auto unitarity_error(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  const auto id = Matrix<Scalar>::Identity(u.rows(), u.cols());
  return max_abs(u.adjoint() * u - id);
}

/// Smallest eigenvalue of the Hermitian part of a complex matrix.
template <typename Real>
Real min_hermitian_eigenvalue(const ComplexMatrix<Real>& m) {
  const ComplexMatrix<Real> h = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// 2-norm condition number; columns are taken as given.
template <typename Derived>
auto condition_number(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  const auto& s = svd.singularValues();
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (s.size() == 0) return Real(1);
  const Real smallest = s(s.size() - 1);
  return smallest == Real(0) ? std::numeric_limits<Real>::infinity() : s(0) / smallest;
}

}  // namespace zenochain
