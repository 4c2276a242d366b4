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
#include <stdexcept>

#include <Eigen/Core>

// Closed-form dynamics of a dot coupled to a single chain level. Nothing
// here goes through the propagator or channel code, so the results can be
// used to check them.

namespace zenochain::twolevel {

template <typename Real = double>
struct TwoLevelParams {
  Real gamma = 1;    // dot-level coupling
  Real epsilon = 0;  // level energy relative to the dot
  Real tau = 1;      // time between measurements
};

template <typename Real>
void validate(const TwoLevelParams<Real>& p) {
  if (!(p.gamma > Real(0)) || !std::isfinite(p.gamma)) throw std::invalid_argument("two-level: gamma must be positive");
  if (!std::isfinite(p.epsilon)) throw std::invalid_argument("two-level: epsilon must be finite");
  if (!(p.tau > Real(0)) || !std::isfinite(p.tau)) throw std::invalid_argument("two-level: tau must be positive");
}

/// Rabi frequency sqrt(gamma^2 + epsilon^2 / 4).
template <typename Real>
Real omega(const TwoLevelParams<Real>& p) {
  return std::sqrt(p.gamma * p.gamma + p.epsilon * p.epsilon / Real(4));
}

/// Probability of finding the particle on the dot after one period, starting there.
template <typename Real>
Real stay_probability(const TwoLevelParams<Real>& p) {
  const Real w = omega(p);
  const Real s = std::sin(w * p.tau);
  return Real(1) - (p.gamma / w) * (p.gamma / w) * s * s;
}

/// T(i, j) = |<i|U|j>|^2; doubly stochastic.
template <typename Real>
Eigen::Matrix<Real, 2, 2> transition_matrix(const TwoLevelParams<Real>& p) {
  validate(p);
  const Real t00 = stay_probability(p);
  Eigen::Matrix<Real, 2, 2> t;
  t << t00, Real(1) - t00, Real(1) - t00, t00;
  return t;
}

/// p_M = (1 + (2 T00 - 1)^M) / 2.
template <typename Real>
Real survival_closed_form(const TwoLevelParams<Real>& p, long m) {
  validate(p);
  if (m < 0) throw std::invalid_argument("two-level: m must be non-negative");
  const Real base = Real(2) * stay_probability(p) - Real(1);
  return (Real(1) + std::pow(base, static_cast<Real>(m))) / Real(2);
}

}  // namespace zenochain::twolevel
