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
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zenochain/linalg.hpp"

namespace zenochain {

/// Dot coupled to the first site of an open tight-binding chain.
///
/// Energies are measured in units of the chain hopping `gamma_c`, which is 1
/// unless overridden. Site 0 is the dot (energy reference 0); sites 1..N are
/// the chain. When `epsilons` is empty and `epsilon_seed` is set, on-site
/// energies are drawn uniformly from [-0.5, 0.5]; an empty list without a
/// seed means a uniform chain.
template <typename Real = double>
struct ModelSpec {
  Index n_chain = 1;
  Real gamma = 1;
  Real gamma_c = 1;
  std::vector<Real> epsilons;
  std::optional<std::uint64_t> epsilon_seed;

  Index dim() const noexcept { return n_chain + 1; }
};

template <typename Real = double>
ModelSpec<Real> uniform_chain(Index n_chain, Real gamma) {
  return ModelSpec<Real>{n_chain, gamma, Real(1), std::vector<Real>(n_chain, Real(0)), std::nullopt};
}

// Mapping of raw 64-bit draws to [0, 1) is done by hand: the standard
// distributions are implementation-defined and would break reproducibility
// across standard libraries.
template <typename Real = double>
std::vector<Real> random_onsite_energies(Index n, std::uint64_t seed, Real half_width = Real(0.5)) {
  std::mt19937_64 engine(seed);
  std::vector<Real> out(static_cast<std::size_t>(n));
  for (auto& e : out) {
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    e = static_cast<Real>((2.0 * unit - 1.0) * static_cast<double>(half_width));
  }
  return out;
}

/// On-site energies actually used for `spec`; throws on an inconsistent spec.
template <typename Real>
std::vector<Real> resolve_onsite_energies(const ModelSpec<Real>& spec) {
  if (spec.n_chain < 1) throw std::invalid_argument("n_chain must be at least 1");
  if (!spec.epsilons.empty()) {
    if (static_cast<Index>(spec.epsilons.size()) != spec.n_chain)
      throw std::invalid_argument("epsilons has " + std::to_string(spec.epsilons.size()) +
                                  " entries, expected n_chain = " + std::to_string(spec.n_chain));
    return spec.epsilons;
  }
  if (spec.epsilon_seed) return random_onsite_energies<Real>(spec.n_chain, *spec.epsilon_seed);
  return std::vector<Real>(static_cast<std::size_t>(spec.n_chain), Real(0));
}

template <typename Real>
void validate(const ModelSpec<Real>& spec) {
  if (spec.n_chain < 1) throw std::invalid_argument("n_chain must be at least 1");
  if (!(spec.gamma >= Real(0)) || !std::isfinite(spec.gamma))
    throw std::invalid_argument("gamma must be finite and non-negative");
  if (!(spec.gamma_c > Real(0)) || !std::isfinite(spec.gamma_c))
    throw std::invalid_argument("gamma_c must be finite and positive");
  for (Real e : resolve_onsite_energies(spec))
    if (!std::isfinite(e)) throw std::invalid_argument("on-site energies must be finite");
}

/// Real symmetric Hamiltonian in the position basis (dot, 1, ..., N).
template <typename Real = double>
struct Hamiltonian {
  Matrix<Real> matrix;

  Index dim() const noexcept { return matrix.rows(); }
};

template <typename Real>
Hamiltonian<Real> build_hamiltonian(const ModelSpec<Real>& spec) {
  validate(spec);
  const auto eps = resolve_onsite_energies(spec);
  const Index d = spec.dim();
  Matrix<Real> h = Matrix<Real>::Zero(d, d);
  h(0, 1) = h(1, 0) = -spec.gamma;
  for (Index l = 1; l <= spec.n_chain; ++l) {
    h(l, l) = eps[static_cast<std::size_t>(l - 1)];
    if (l < spec.n_chain) h(l, l + 1) = h(l + 1, l) = -spec.gamma_c;
  }
  return {std::move(h)};
}

/// Band energy -2 cos k of the isolated uniform chain (unit hopping).
template <typename Real>
Real chain_dispersion(Real k) {
  if (!(k > Real(0) && k <= std::numbers::pi_v<Real>))
    throw std::domain_error("chain_dispersion: k must lie in (0, pi]");
  return -Real(2) * std::cos(k);
}

template <typename Real>
Real chain_group_velocity(Real k) {
  return Real(2) * std::sin(k);
}

template <typename Real = double>
constexpr Real max_group_velocity() noexcept {
  return Real(2);
}

}  // namespace zenochain
