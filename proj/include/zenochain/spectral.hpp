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
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "zenochain/channel.hpp"
#include "zenochain/linalg.hpp"
#include "zenochain/model.hpp"
#include "zenochain/propagator.hpp"

namespace zenochain {

/// Tolerances shared by the spectral routines.
struct SpectralTolerances {
  double unit = 1e-9;             // |lambda - 1| (or 1 - |lambda|) counted as unit
  double pairing = 1e-8;          // eigenvalue distance for left/right pairing
  double max_condition = 1e8;     // beyond this the modes are not trusted
  double min_gram_rcond = 1e-10;  // degenerate clusters: Gram block invertibility
};

/// Measurement map as a D^2 x D^2 matrix acting on row-stacked density
/// matrices, vec(rho)[i*D + j] = rho(i, j).
template <typename Real = double>
struct Superoperator {
  Index dim = 0;  // D, the Hilbert-space dimension
  ComplexMatrix<Real> matrix;
};

/// S = sum over {dot, chain} of (P U) (x) conj(P U). Entry ((i,j),(k,l)) is
/// U(i,k) conj(U(j,l)) when i and j lie in the same block and zero otherwise.
template <typename Real>
Superoperator<Real> build_superoperator(const Propagator<Real>& u) {
  const Index d = u.dim();
  Superoperator<Real> s{d, ComplexMatrix<Real>::Zero(d * d, d * d)};
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if ((i == 0) != (j == 0)) continue;
      for (Index k = 0; k < d; ++k)
        for (Index l = 0; l < d; ++l)
          s.matrix(vec_index(i, j, d), vec_index(k, l, d)) = u.matrix(i, k) * std::conj(u.matrix(j, l));
    }
  return s;
}

/// Dual map under the pairing Tr(phi M(Phi)) = Tr(Phi M+(phi)):
/// S+((p,q),(r,s)) = S((s,r),(q,p)).
template <typename Real>
Superoperator<Real> adjoint_map(const Superoperator<Real>& s) {
  const Index d = s.dim;
  Superoperator<Real> a{d, ComplexMatrix<Real>(d * d, d * d)};
  for (Index p = 0; p < d; ++p)
    for (Index q = 0; q < d; ++q)
      for (Index r = 0; r < d; ++r)
        for (Index t = 0; t < d; ++t)
          a.matrix(vec_index(p, q, d), vec_index(r, t, d)) = s.matrix(vec_index(t, r, d), vec_index(q, p, d));
  return a;
}

template <typename Real>
ComplexMatrix<Real> apply(const Superoperator<Real>& s, const ComplexMatrix<Real>& m) {
  return unvectorize(s.matrix * vectorize(m), s.dim);
}

template <typename Real>
DensityMatrix<Real> apply(const Superoperator<Real>& s, const DensityMatrix<Real>& rho) {
  return {apply(s, rho.matrix)};
}

template <typename Real = double>
struct SpectralDecomposition {
  Index dim = 0;
  std::vector<Complex<Real>> eigenvalues;   // descending |lambda|, then real, then imaginary
  std::vector<ComplexMatrix<Real>> right_modes;
  std::vector<ComplexMatrix<Real>> left_modes;  // Tr(left_n right_m) = delta_nm
  Real condition_number = std::numeric_limits<Real>::quiet_NaN();
  bool near_defective = false;
  bool pairing_failed = false;
  Index degenerate_clusters = 0;  // clusters biorthogonalized jointly through their Gram block
  Index unit_multiplicity = 0;
  SpectralTolerances tolerances;

  bool has_modes() const noexcept { return !right_modes.empty(); }
  bool usable() const noexcept { return has_modes() && !near_defective && !pairing_failed; }
};

enum class DecomposeMode { full, eigenvalues_only };

namespace detail {

template <typename Real>
std::vector<Index> spectral_order(const ComplexVector<Real>& values) {
  // Keys are quantized so that rounding noise between, e.g., the two members
  // of a conjugate pair cannot reorder them.
  const auto q = [](Real x) { return std::llround(static_cast<double>(x) * 1e12); };
  std::vector<std::tuple<long long, long long, long long>> keys;
  keys.reserve(static_cast<std::size_t>(values.size()));
  for (Index n = 0; n < values.size(); ++n)
    keys.emplace_back(q(std::abs(values(n))), q(values(n).real()), q(values(n).imag()));
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
  });
  return order;
}

template <typename Real>
Complex<Real> trace_pairing(const ComplexMatrix<Real>& left, const ComplexMatrix<Real>& right) {
  return (left.array() * right.transpose().array()).sum();
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

template <typename Real>
Index count_unit(const std::vector<Complex<Real>>& values, double tol) {
  return static_cast<Index>(std::count_if(values.begin(), values.end(), [&](const Complex<Real>& z) {
    return std::abs(z - Complex<Real>(1)) <= Real(tol);
  }));
}

}  // namespace detail

/// Sorted eigenvalues of any square complex matrix.
template <typename Real>
std::vector<Complex<Real>> sorted_eigenvalues(const ComplexMatrix<Real>& m) {
  Eigen::ComplexEigenSolver<ComplexMatrix<Real>> solver(m, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("complex eigensolver did not converge");
  const auto order = detail::spectral_order<Real>(solver.eigenvalues());
  std::vector<Complex<Real>> out;
  out.reserve(order.size());
  for (Index n : order) out.push_back(solver.eigenvalues()(n));
  return out;
}

/// Biorthogonal eigensystem of the measurement map.
///
/// Right modes come from the map, left modes from the dual map; the two are
/// paired by eigenvalue proximity. Eigenvalues closer than the pairing
/// tolerance form a cluster (the map always has a 2N-fold zero eigenvalue),
/// and inside a cluster the left modes are recombined with the inverse Gram
/// matrix so that Tr(left_n right_m) = delta_nm holds exactly. Such clusters
/// are counted in `degenerate_clusters`; a cluster with mismatched sizes or a
/// singular Gram block sets `pairing_failed`.
template <typename Real>
SpectralDecomposition<Real> decompose(const Superoperator<Real>& s, DecomposeMode mode = DecomposeMode::full,
                                      const SpectralTolerances& tol = {}) {
  SpectralDecomposition<Real> dec;
  dec.dim = s.dim;
  dec.tolerances = tol;
  if (mode == DecomposeMode::eigenvalues_only) {
    dec.eigenvalues = sorted_eigenvalues<Real>(s.matrix);
    dec.unit_multiplicity = detail::count_unit(dec.eigenvalues, tol.unit);
    return dec;
  }

  Eigen::ComplexEigenSolver<ComplexMatrix<Real>> right(s.matrix, true);
  Eigen::ComplexEigenSolver<ComplexMatrix<Real>> left(adjoint_map(s).matrix, true);
  if (right.info() != Eigen::Success || left.info() != Eigen::Success)
    throw std::runtime_error("decompose: complex eigensolver did not converge");

  const auto r_order = detail::spectral_order<Real>(right.eigenvalues());
  const auto l_order = detail::spectral_order<Real>(left.eigenvalues());
  const std::size_t n = r_order.size();
  const Index d = s.dim;

  ComplexMatrix<Real> r_vecs(d * d, static_cast<Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    dec.eigenvalues.push_back(right.eigenvalues()(r_order[k]));
    r_vecs.col(static_cast<Index>(k)) = right.eigenvectors().col(r_order[k]).normalized();
  }
  std::vector<Complex<Real>> l_values;
  for (std::size_t k = 0; k < n; ++k) l_values.push_back(left.eigenvalues()(l_order[k]));

  dec.condition_number = condition_number(r_vecs);
  dec.near_defective = !(dec.condition_number <= Real(tol.max_condition));
  dec.unit_multiplicity = detail::count_unit(dec.eigenvalues, tol.unit);

  dec.right_modes.reserve(n);
  for (std::size_t k = 0; k < n; ++k) dec.right_modes.push_back(unvectorize(r_vecs.col(static_cast<Index>(k)), d));
  std::vector<ComplexMatrix<Real>> raw_left;
  raw_left.reserve(n);
  for (std::size_t k = 0; k < n; ++k) raw_left.push_back(unvectorize(left.eigenvectors().col(l_order[k]), d));

  // Clusters over right (0..n-1) and left (n..2n-1) eigenvalues.
  detail::DisjointSets sets(2 * n);
  const auto value = [&](std::size_t k) { return k < n ? dec.eigenvalues[k] : l_values[k - n]; };
  for (std::size_t a = 0; a < 2 * n; ++a)
    for (std::size_t b = a + 1; b < 2 * n; ++b)
      if (std::abs(value(a) - value(b)) <= Real(tol.pairing)) sets.unite(a, b);

  std::vector<std::vector<std::size_t>> r_members(2 * n), l_members(2 * n);
  for (std::size_t k = 0; k < n; ++k) r_members[sets.find(k)].push_back(k);
  for (std::size_t k = 0; k < n; ++k) l_members[sets.find(n + k)].push_back(k);

  dec.left_modes.assign(n, ComplexMatrix<Real>::Zero(d, d));
  for (std::size_t root = 0; root < 2 * n; ++root) {
    const auto& rs = r_members[root];
    const auto& ls = l_members[root];
    if (rs.empty() && ls.empty()) continue;
    if (rs.size() != ls.size()) {
      dec.pairing_failed = true;
      continue;
    }
    const Index m = static_cast<Index>(rs.size());
    if (m > 1) ++dec.degenerate_clusters;
    ComplexMatrix<Real> gram(m, m);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b)
        gram(a, b) = detail::trace_pairing(raw_left[ls[static_cast<std::size_t>(a)]],
                                           dec.right_modes[rs[static_cast<std::size_t>(b)]]);
    Eigen::FullPivLU<ComplexMatrix<Real>> lu(gram);
    if (lu.rcond() < Real(tol.min_gram_rcond)) {
      dec.pairing_failed = true;
      continue;
    }
    const ComplexMatrix<Real> inv = lu.inverse();
    for (Index a = 0; a < m; ++a) {
      ComplexMatrix<Real> mode = ComplexMatrix<Real>::Zero(d, d);
      for (Index c = 0; c < m; ++c) mode += inv(a, c) * raw_left[ls[static_cast<std::size_t>(c)]];
      dec.left_modes[rs[static_cast<std::size_t>(a)]] = std::move(mode);
    }
  }

  // Stationary pair: right mode with unit trace, so that the left mode is the identity.
  if (dec.unit_multiplicity == 1) {
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(dec.eigenvalues[k] - Complex<Real>(1)) > Real(tol.unit)) continue;
      const Complex<Real> tr = dec.right_modes[k].trace();
      if (std::abs(tr) > Real(0)) {
        dec.right_modes[k] /= tr;
        dec.left_modes[k] *= tr;
      }
      break;
    }
  }
  return dec;
}

/// Largest deviation from Tr(left_n right_m) = delta_nm.
template <typename Real>
Real biorthogonality_error(const SpectralDecomposition<Real>& dec) {
  Real worst = 0;
  const std::size_t n = dec.right_modes.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Complex<Real> expect = a == b ? Complex<Real>(1) : Complex<Real>(0);
      worst = std::max(worst, std::abs(detail::trace_pairing(dec.left_modes[a], dec.right_modes[b]) - expect));
    }
  return worst;
}

/// Dot survival p_M for M = 0..m_steps from the spectral expansion,
/// p_M = sum_n lambda_n^M <0|left_n|0><0|right_n|0>.
template <typename Real>
std::vector<Real> survival_spectral(const SpectralDecomposition<Real>& dec, Index m_steps) {
  if (!dec.has_modes()) throw std::logic_error("survival_spectral: decomposition has no modes");
  if (dec.near_defective)
    throw std::logic_error("survival_spectral: decomposition is near-defective (condition number " +
                           std::to_string(static_cast<double>(dec.condition_number)) + "); iterate directly");
  if (dec.pairing_failed) throw std::logic_error("survival_spectral: left/right mode pairing failed; iterate directly");
  if (m_steps < 0) throw std::invalid_argument("survival_spectral: m_steps must be non-negative");

  const std::size_t n = dec.eigenvalues.size();
  std::vector<Complex<Real>> weight(n), power(n, Complex<Real>(1));
  for (std::size_t k = 0; k < n; ++k) weight[k] = dec.left_modes[k](0, 0) * dec.right_modes[k](0, 0);

  std::vector<Real> out;
  out.reserve(static_cast<std::size_t>(m_steps + 1));
  for (Index m = 0; m <= m_steps; ++m) {
    Complex<Real> p = 0;
    for (std::size_t k = 0; k < n; ++k) {
      p += weight[k] * power[k];
      power[k] *= dec.eigenvalues[k];
    }
    out.push_back(p.real());
  }
  return out;
}

enum RateFlag : unsigned {
  rate_ok = 0,
  rate_zero_coupling = 1u << 0,
  rate_degenerate_stationary = 1u << 1,
  rate_no_subunit_spectrum = 1u << 2,
  rate_near_defective = 1u << 3,
};

inline std::string rate_flags_to_string(unsigned flags) {
  if (flags == rate_ok) return "ok";
  std::string out;
  const auto add = [&](unsigned bit, const char* name) {
    if (!(flags & bit)) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(rate_zero_coupling, "zero_coupling");
  add(rate_degenerate_stationary, "degenerate_stationary");
  add(rate_no_subunit_spectrum, "no_subunit_spectrum");
  add(rate_near_defective, "near_defective");
  return out;
}

template <typename Real = double>
struct DecayRate {
  Complex<Real> lambda1 = 0;
  Real lambda1_modulus = 0;
  Real raw_rate = std::numeric_limits<Real>::quiet_NaN();    // -ln|lambda_1|
  Real gamma_rate = std::numeric_limits<Real>::quiet_NaN();  // -ln|lambda_1| / gamma^2
  unsigned flags = rate_ok;

  bool ok() const noexcept { return flags == rate_ok; }
};

/// Asymptotic decay rate from the slowest non-stationary eigenvalue.
template <typename Real>
DecayRate<Real> decay_rate(const SpectralDecomposition<Real>& dec, Real gamma) {
  DecayRate<Real> out;
  if (!(gamma > Real(0))) out.flags |= rate_zero_coupling;
  if (dec.unit_multiplicity > 1) out.flags |= rate_degenerate_stationary;
  if (dec.has_modes() && dec.near_defective) out.flags |= rate_near_defective;

  const Real cut = Real(1) - Real(dec.tolerances.unit);
  const auto it = std::find_if(dec.eigenvalues.begin(), dec.eigenvalues.end(),
                               [&](const Complex<Real>& z) { return std::abs(z) < cut; });
  if (it == dec.eigenvalues.end()) {
    out.flags |= rate_no_subunit_spectrum;
    out.raw_rate = out.gamma_rate = std::numeric_limits<Real>::infinity();
    return out;
  }
  out.lambda1 = *it;
  out.lambda1_modulus = std::abs(*it);
  if (out.flags & rate_degenerate_stationary) return out;
  out.raw_rate = -std::log(out.lambda1_modulus);
  if (!(out.flags & rate_zero_coupling)) out.gamma_rate = out.raw_rate / (gamma * gamma);
  return out;
}

template <typename Real = double>
struct RateRow {
  Real tau = 0;
  Real tau_tilde = 0;
  DecayRate<Real> rate;
};

/// Decay rate over a grid of measurement intervals. Points are independent
/// and are computed on `threads` workers (0: hardware concurrency); row order
/// follows the grid.
template <typename Real>
std::vector<RateRow<Real>> rate_scan(const ModelSpec<Real>& spec, const std::vector<Real>& tau_grid,
                                     unsigned threads = 0) {
  if (tau_grid.empty()) throw std::invalid_argument("rate_scan: empty tau grid");
  for (Real t : tau_grid)
    if (!(t > Real(0)) || !std::isfinite(t)) throw std::invalid_argument("rate_scan: grid values must be positive");

  const EigenSystem<Real> eig = diagonalize(build_hamiltonian(spec));
  const Real width = spectral_width(eig);
  const Real t_star = width > Real(0) ? tau_star(eig) : std::numeric_limits<Real>::quiet_NaN();

  std::vector<RateRow<Real>> rows(tau_grid.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      const auto u = propagate(eig, tau_grid[k]);
      const auto dec = decompose(build_superoperator(u), DecomposeMode::eigenvalues_only);
      rows[k] = {tau_grid[k], tau_grid[k] / t_star, decay_rate(dec, spec.gamma)};
    }
  };

  unsigned n_workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, rows.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  return rows;
}

/// Unique stationary state, read off the unit eigenvalue's right mode.
template <typename Real>
DensityMatrix<Real> stationary_state(const SpectralDecomposition<Real>& dec) {
  if (dec.unit_multiplicity != 1)
    throw std::domain_error("stationary_state: unit eigenspace has dimension " +
                            std::to_string(dec.unit_multiplicity) + ", stationary state is not unique");
  if (!dec.has_modes()) throw std::logic_error("stationary_state: decomposition has no modes");
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    if (std::abs(dec.eigenvalues[k] - Complex<Real>(1)) > Real(dec.tolerances.unit)) continue;
    ComplexMatrix<Real> m = dec.right_modes[k];
    m = (m + m.adjoint()).eval() / Real(2);
    m /= m.trace().real();
    return {std::move(m)};
  }
  throw std::logic_error("stationary_state: unit eigenvalue not found");
}

template <typename Real>
Real deviation_from_mixed(const DensityMatrix<Real>& rho) {
  return max_abs(rho.matrix - maximally_mixed<Real>(rho.dim()).matrix);
}

template <typename Real = double>
struct ChainInvariantReport {
  bool has_invariant_chain_state = false;
  Real top_chain_eigenvalue_modulus = 0;
  Index unit_eigenspace_dimension_of_full_map = 0;
};

/// Map z -> P_c U z U^+ P_c restricted to the N x N chain block.
template <typename Real>
ComplexMatrix<Real> chain_superoperator(const Propagator<Real>& u) {
  const Index n = u.dim() - 1;
  const ComplexMatrix<Real> uc = u.matrix.bottomRightCorner(n, n);
  ComplexMatrix<Real> sc(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) sc(vec_index(i, j, n), vec_index(k, l, n)) = uc(i, k) * std::conj(uc(j, l));
  return sc;
}

/// Does U(tau) leave some chain-supported operator invariant? The infinite
/// temperature state is the unique fixed point exactly when it does not;
/// the report carries both sides of that equivalence.
template <typename Real>
ChainInvariantReport<Real> chain_invariant_check(const Propagator<Real>& u, double tol = 1e-9) {
  if (u.dim() < 2) throw std::invalid_argument("chain_invariant_check: needs at least one chain site");
  ChainInvariantReport<Real> rep;
  const auto chain_values = sorted_eigenvalues<Real>(chain_superoperator(u));
  rep.top_chain_eigenvalue_modulus = std::abs(chain_values.front());
  rep.has_invariant_chain_state = rep.top_chain_eigenvalue_modulus >= Real(1) - Real(tol);
  const auto full_values = sorted_eigenvalues<Real>(build_superoperator(u).matrix);
  rep.unit_eigenspace_dimension_of_full_map = detail::count_unit(full_values, tol);
  return rep;
}

}  // namespace zenochain
