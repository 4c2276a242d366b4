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
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "zenochain/linalg.hpp"
#include "zenochain/model.hpp"
#include "zenochain/propagator.hpp"

namespace zenochain {

template <typename Real = double>
struct DensityMatrix {
  ComplexMatrix<Real> matrix;

  Index dim() const noexcept { return matrix.rows(); }
  Real trace() const { return matrix.trace().real(); }
  Real population(Index site) const { return matrix(site, site).real(); }
};

/// Observables recorded after each measurement cycle.
template <typename Real = double>
struct TrajectoryRecord {
  Index step = 0;
  Real time = 0;
  Real survival = 0;
  std::vector<Real> diag_profile;
  Real offdiag_avg = 0;
};

template <typename Real = double>
struct Trajectory {
  std::vector<TrajectoryRecord<Real>> records;
  std::map<Index, DensityMatrix<Real>> snapshots;
};

/// Particle on the dot: rho = |0><0|.
template <typename Real = double>
DensityMatrix<Real> initial_state(Index dim) {
  if (dim < 2) throw std::invalid_argument("initial_state: dimension must be at least 2");
  ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(dim, dim);
  m(0, 0) = Real(1);
  return {std::move(m)};
}

template <typename Real = double>
DensityMatrix<Real> maximally_mixed(Index dim) {
  return {ComplexMatrix<Real>::Identity(dim, dim) / Real(dim)};
}

/// Nonselective dot-occupancy measurement: drops every dot-chain coherence.
template <typename Real>
DensityMatrix<Real> measure_reduce(const DensityMatrix<Real>& rho) {
  DensityMatrix<Real> out = rho;
  const Index d = rho.dim();
  out.matrix.row(0).tail(d - 1).setZero();
  out.matrix.col(0).tail(d - 1).setZero();
  return out;
}

/// Free evolution over one period followed by a measurement, without the
/// Hermitian clean-up `step` applies.
template <typename Real>
DensityMatrix<Real> step_raw(const DensityMatrix<Real>& rho, const Propagator<Real>& u) {
  if (rho.dim() != u.dim())
    throw std::invalid_argument("step: density matrix has dimension " + std::to_string(rho.dim()) +
                                " but propagator has " + std::to_string(u.dim()));
  return measure_reduce(DensityMatrix<Real>{u.matrix * rho.matrix * u.matrix.adjoint()});
}

template <typename Real>
DensityMatrix<Real> step(const DensityMatrix<Real>& rho, const Propagator<Real>& u) {
  DensityMatrix<Real> out = step_raw(rho, u);
  out.matrix = (out.matrix + out.matrix.adjoint()).eval() / Real(2);
  return out;
}

/// Mean modulus of the D(D-1) off-diagonal elements.
template <typename Real>
Real offdiag_average(const DensityMatrix<Real>& rho) {
  const Index d = rho.dim();
  if (d < 2) return Real(0);
  Real total = 0;
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i)
      if (i != j) total += std::abs(rho.matrix(i, j));
  return total / Real(d * (d - 1));
}

template <typename Real>
TrajectoryRecord<Real> make_record(const DensityMatrix<Real>& rho, Index step_index, Real tau) {
  TrajectoryRecord<Real> rec;
  rec.step = step_index;
  rec.time = Real(step_index) * tau;
  rec.diag_profile.resize(static_cast<std::size_t>(rho.dim()));
  for (Index i = 0; i < rho.dim(); ++i) rec.diag_profile[static_cast<std::size_t>(i)] = rho.population(i);
  rec.survival = rec.diag_profile.front();
  rec.offdiag_avg = offdiag_average(rho);
  return rec;
}

/// Iterate `n_steps` measurement cycles from |0><0|, keeping full density
/// matrices only at the requested step indices.
template <typename Real>
Trajectory<Real> evolve(const Propagator<Real>& u, Index n_steps, std::span<const Index> snapshot_steps = {}) {
  if (n_steps < 1) throw std::invalid_argument("evolve: n_steps must be at least 1");
  if (!(u.tau > Real(0))) throw std::invalid_argument("evolve: tau must be positive");
  Trajectory<Real> traj;
  traj.records.reserve(static_cast<std::size_t>(n_steps + 1));
  const auto wanted = [&](Index m) {
    return std::find(snapshot_steps.begin(), snapshot_steps.end(), m) != snapshot_steps.end();
  };

  DensityMatrix<Real> rho = initial_state<Real>(u.dim());
  for (Index m = 0;; ++m) {
    traj.records.push_back(make_record(rho, m, u.tau));
    if (wanted(m)) traj.snapshots.emplace(m, rho);
    if (m == n_steps) break;
    rho = step(rho, u);
  }
  return traj;
}

template <typename Real>
std::vector<TrajectoryRecord<Real>> evolve(const ModelSpec<Real>& spec, Real tau, Index n_steps) {
  return evolve(propagator_for(spec, tau), n_steps).records;
}

/// State restricted to the measured block structure: dot population p and
/// chain block chi (N x N); dot-chain coherences are identically zero.
template <typename Real = double>
struct BlockState {
  Real dot_population = 1;
  ComplexMatrix<Real> chain_block;
};

template <typename Real>
BlockState<Real> initial_block_state(Index n_chain) {
  return {Real(1), ComplexMatrix<Real>::Zero(n_chain, n_chain)};
}

/// One cycle of the coupled (p, chi) recursion.
template <typename Real>
BlockState<Real> block_step(const BlockState<Real>& s, const Propagator<Real>& u) {
  const Index n = u.dim() - 1;
  if (s.chain_block.rows() != n) throw std::invalid_argument("block_step: dimension mismatch");
  const auto& m = u.matrix;
  const auto dot_to_chain = m.col(0).tail(n);            // <l|U|0>
  const auto chain_to_dot = m.row(0).tail(n);            // <0|U|l>
  const auto chain_chain = m.bottomRightCorner(n, n);

  BlockState<Real> next;
  next.dot_population = s.dot_population * std::norm(m(0, 0)) +
                        (chain_to_dot * s.chain_block * chain_to_dot.adjoint())(0, 0).real();
  next.chain_block = s.dot_population * dot_to_chain * dot_to_chain.adjoint() +
                     chain_chain * s.chain_block * chain_chain.adjoint();
  return next;
}

template <typename Real>
DensityMatrix<Real> to_density(const BlockState<Real>& s) {
  const Index n = s.chain_block.rows();
  ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(n + 1, n + 1);
  m(0, 0) = s.dot_population;
  m.bottomRightCorner(n, n) = s.chain_block;
  return {std::move(m)};
}

struct FrontOptions {
  double threshold = 1e-3;
  Index first_site = 5;
  Index last_site = 0;  // 0 selects N/2
  Index min_crossed_sites = 5;
};

template <typename Real = double>
struct FrontVelocity {
  bool ok = false;
  Real velocity = std::numeric_limits<Real>::quiet_NaN();
  Index crossed_sites = 0;  // inside the fit window
  Index fit_points = 0;
  std::string reason;
};

/// Speed of the leading population front.
///
/// For every chain site the first recorded time T_l with population above
/// the threshold is located. The leading edge is the running maximum of the
/// sites that have crossed; each advance of the edge to a site inside
/// [first_site, last_site] gives a point (T_l, l), and the velocity is the
/// least-squares slope of l against T over those points. Using the edge
/// instead of every site keeps sites sitting on interference nodes from
/// distorting the fit when tau is coarse.
template <typename Real>
FrontVelocity<Real> front_velocity(std::span<const TrajectoryRecord<Real>> records,
                                   const FrontOptions& opts = {}) {
  FrontVelocity<Real> out;
  if (records.empty()) {
    out.reason = "no records";
    return out;
  }
  const Index n = static_cast<Index>(records.front().diag_profile.size()) - 1;
  const Index lo = std::max<Index>(1, opts.first_site);
  const Index hi = opts.last_site > 0 ? std::min(opts.last_site, n) : n / 2;
  if (hi < lo) {
    out.reason = "fit window is empty for N = " + std::to_string(n);
    return out;
  }

  std::vector<Real> first_time(static_cast<std::size_t>(n + 1), std::numeric_limits<Real>::infinity());
  for (const auto& rec : records)
    for (Index l = 1; l <= n; ++l) {
      auto& t = first_time[static_cast<std::size_t>(l)];
      if (!std::isfinite(t) && rec.diag_profile[static_cast<std::size_t>(l)] >= Real(opts.threshold))
        t = rec.time;
    }

  for (Index l = lo; l <= hi; ++l)
    if (std::isfinite(first_time[static_cast<std::size_t>(l)])) ++out.crossed_sites;
  if (out.crossed_sites < opts.min_crossed_sites) {
    out.reason = "only " + std::to_string(out.crossed_sites) + " sites in the fit window crossed the threshold";
    return out;
  }

  // Edge advances: a site crossing strictly later than every site beyond it
  // (ties keep the farthest site).
  std::vector<std::pair<Real, Real>> points;
  Real later = std::numeric_limits<Real>::infinity();
  for (Index l = n; l >= 1; --l) {
    const Real t = first_time[static_cast<std::size_t>(l)];
    if (!std::isfinite(t) || !(t < later)) continue;
    later = t;
    if (l >= lo && l <= hi) points.emplace_back(t, Real(l));
  }
  out.fit_points = static_cast<Index>(points.size());
  if (points.size() < 2) {
    out.reason = "front advanced at fewer than two distinct times inside the fit window";
    return out;
  }

  Real mt = 0, ml = 0;
  for (const auto& [t, l] : points) mt += t, ml += l;
  mt /= Real(points.size());
  ml /= Real(points.size());
  Real stt = 0, stl = 0;
  for (const auto& [t, l] : points) stt += (t - mt) * (t - mt), stl += (t - mt) * (l - ml);
  out.velocity = stl / stt;
  out.ok = true;
  return out;
}

template <typename Real>
FrontVelocity<Real> front_velocity(const std::vector<TrajectoryRecord<Real>>& records,
                                   const FrontOptions& opts = {}) {
  return front_velocity(std::span<const TrajectoryRecord<Real>>(records), opts);
}

}  // namespace zenochain
