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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "zenochain/linalg.hpp"
#include "zenochain/model.hpp"

namespace zenochain {

/// Eigenpairs of a Hamiltonian: energies ascending, eigenvectors as columns
/// with the first non-negligible component of each column positive.
template <typename Real = double>
struct EigenSystem {
  Vector<Real> energies;
  Matrix<Real> vectors;

  Index dim() const noexcept { return energies.size(); }
};

/// Stroboscopic unitary U(tau) = exp(-i H tau), hbar = 1.
template <typename Real = double>
struct Propagator {
  Real tau = 0;
  ComplexMatrix<Real> matrix;

  Index dim() const noexcept { return matrix.rows(); }
};

template <typename Real>
EigenSystem<Real> diagonalize(const Hamiltonian<Real>& h) {
  if (h.dim() == 0 || h.matrix.cols() != h.dim())
    throw std::invalid_argument("diagonalize: Hamiltonian must be square and non-empty");
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(h.matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("diagonalize: symmetric eigensolver did not converge");

  EigenSystem<Real> eig{solver.eigenvalues(), solver.eigenvectors()};
  const Real cut = Real(1e3) * std::numeric_limits<Real>::epsilon();
  for (Index c = 0; c < eig.vectors.cols(); ++c) {
    for (Index r = 0; r < eig.vectors.rows(); ++r) {
      const Real x = eig.vectors(r, c);
      if (std::abs(x) > cut) {
        if (x < Real(0)) eig.vectors.col(c) *= Real(-1);
        break;
      }
    }
  }
  return eig;
}

template <typename Real>
Propagator<Real> propagate(const EigenSystem<Real>& eig, Real tau) {
  if (!(tau >= Real(0)) || !std::isfinite(tau))
    throw std::invalid_argument("propagate: tau must be finite and non-negative");
  const Index d = eig.dim();
  ComplexVector<Real> phases(d);
  for (Index n = 0; n < d; ++n) phases(n) = std::polar(Real(1), -eig.energies(n) * tau);
  const ComplexMatrix<Real> v = eig.vectors.template cast<Complex<Real>>();
  return {tau, v * phases.asDiagonal() * v.transpose()};
}

template <typename Real>
Propagator<Real> propagator_for(const ModelSpec<Real>& spec, Real tau) {
  return propagate(diagonalize(build_hamiltonian(spec)), tau);
}

/// Width E_max - E_min of the spectrum.
template <typename Real>
Real spectral_width(const EigenSystem<Real>& eig) {
  if (eig.dim() < 2) throw std::invalid_argument("spectral_width: needs at least two levels");
  return eig.energies(eig.dim() - 1) - eig.energies(0);
}

/// Time scale 2 pi / Delta E separating regular from erratic decay rates.
template <typename Real>
Real tau_star(const EigenSystem<Real>& eig) {
  return Real(2) * std::numbers::pi_v<Real> / spectral_width(eig);
}

}  // namespace zenochain
