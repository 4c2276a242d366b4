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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "zenochain/spectral.hpp"
#include "zenochain/twolevel.hpp"

using namespace zenochain;

namespace {
constexpr double kPi = std::numbers::pi;

// Largest eigenvalue modulus of the chain-restricted map for N = 9,
// gamma = 1, tau = 1, from a LAPACK general eigensolver.
constexpr double kTopChainModulusN9 = 0.97974186735627555;

Propagator<double> random_propagator(std::mt19937_64& rng, Index max_chain) {
  const Index n = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(max_chain));
  const ModelSpec<double> spec{n, oracle::uniform(rng, 0.2, 1.5), 1.0, {}, rng()};
  return propagator_for(spec, oracle::uniform(rng, 0.2, 5.0));
}

std::complex<double> pairing(const Eigen::MatrixXcd& left, const Eigen::MatrixXcd& right) {
  return (left * right).trace();
}

}  // namespace

TEST(BuildSuperoperator, MatchesKroneckerConstruction) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_propagator(rng, 5);
    EXPECT_LE(max_abs(build_superoperator(u).matrix - oracle::superoperator_kron(u.matrix)), 1e-15);
  }
}

TEST(BuildSuperoperator, ZeroTimeIsTheMeasurement) {
  const auto u = propagator_for(uniform_chain<double>(3, 1.0), 0.0);
  const auto s = build_superoperator(u);
  std::mt19937_64 rng(103);
  const DensityMatrix<double> rho{oracle::random_hermitian_unit_trace(4, rng)};
  EXPECT_LE(max_abs(apply(s, rho).matrix - measure_reduce(rho).matrix), 1e-12);
}

TEST(BuildSuperoperator, MixedStateIsFixed) {
  const auto s = build_superoperator(propagator_for(ModelSpec<double>{5, 0.7, 1.0, {}, 5}, 1.4));
  const auto mixed = maximally_mixed<double>(6);
  EXPECT_LE(max_abs(apply(s, mixed).matrix - mixed.matrix), 1e-12);
}

TEST(BuildSuperoperator, AgreesWithChannelStep) {
  std::mt19937_64 rng(107);
  const auto u = propagator_for(ModelSpec<double>{3, 0.9, 1.0, {}, 13}, 1.7);
  const auto s = build_superoperator(u);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix<double> rho{oracle::random_hermitian_unit_trace(4, rng)};
    EXPECT_LE(max_abs(apply(s, rho).matrix - step_raw(rho, u).matrix), 1e-12);
  }
}

TEST(AdjointMap, MatchesDirectConstructionAndDuality) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_propagator(rng, 4);
    const Index d = u.dim();
    const auto s = build_superoperator(u);
    const auto a = adjoint_map(s);

    // M+(phi) = sum P_a U^+ ... : row-stacked (U^+ P)(x)conj(U^+ P).
    const Eigen::MatrixXcd ud = u.matrix.adjoint();
    const Eigen::MatrixXcd x = ud * oracle::dot_projector(d), y = ud * oracle::chain_projector(d);
    EXPECT_LE(max_abs(a.matrix - (oracle::kron(x, x.conjugate()) + oracle::kron(y, y.conjugate()))), 1e-14);

    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    EXPECT_LE(max_abs(apply(a, id) - id), 1e-10);

    const auto phi = oracle::random_hermitian_unit_trace(d, rng);
    const auto big_phi = oracle::random_density(d, rng);
    EXPECT_LE(std::abs(pairing(phi, apply(s, big_phi)) - pairing(big_phi, apply(a, phi))), 1e-12);
  }
}

TEST(Decompose, StationaryPairAndUnitDisk) {
  const auto s = build_superoperator(propagator_for(uniform_chain<double>(9, 1.0), 1.0));
  const auto dec = decompose(s);
  ASSERT_EQ(dec.eigenvalues.size(), 100u);
  EXPECT_LE(std::abs(dec.eigenvalues[0] - 1.0), 1e-9);
  EXPECT_EQ(dec.unit_multiplicity, 1);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(10, 10);
  EXPECT_LE(max_abs(dec.right_modes[0] - id / 10.0), 1e-8);
  EXPECT_LE(max_abs(dec.left_modes[0] - id), 1e-8);
  for (const auto& z : dec.eigenvalues) EXPECT_LE(std::abs(z), 1 + 1e-9);
  EXPECT_FALSE(dec.near_defective);
  EXPECT_FALSE(dec.pairing_failed);
  EXPECT_GE(dec.degenerate_clusters, 1);  // 2N-fold zero eigenvalue
  EXPECT_LE(biorthogonality_error(dec), 1e-8);
  EXPECT_TRUE(std::isfinite(dec.condition_number));
}

TEST(Decompose, OrderingIsSortedAndDeterministic) {
  const auto s = build_superoperator(propagator_for(ModelSpec<double>{4, 0.8, 1.0, {}, 21}, 2.3));
  const auto a = decompose(s);
  const auto b = decompose(s);
  ASSERT_EQ(a.eigenvalues, b.eigenvalues);
  for (std::size_t k = 1; k < a.eigenvalues.size(); ++k)
    EXPECT_GE(std::abs(a.eigenvalues[k - 1]), std::abs(a.eigenvalues[k]) - 1e-12);
}

TEST(Decompose, LeftModesMatchInverseOfRightModes) {
  std::mt19937_64 rng(113);
  const auto dec = decompose(build_superoperator(propagator_for(ModelSpec<double>{3, 0.9, 1.0, {}, 3}, 1.2)));
  const Index d = dec.dim;
  Eigen::MatrixXcd r(d * d, d * d);
  for (Index k = 0; k < d * d; ++k) r.col(k) = oracle::vec_rows(dec.right_modes[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXcd w = r.inverse();
  const auto x = oracle::random_density(d, rng);
  for (Index k = 0; k < d * d; ++k) {
    if (std::abs(dec.eigenvalues[static_cast<std::size_t>(k)]) < 1e-8) continue;  // zero cluster: basis is arbitrary
    const auto via_left = pairing(dec.left_modes[static_cast<std::size_t>(k)], x);
    const auto via_inverse = (w.row(k) * oracle::vec_rows(x))(0, 0);
    EXPECT_LE(std::abs(via_left - via_inverse), 1e-9) << "mode " << k;
  }
}

TEST(Decompose, TwoLevelPopulationEigenvalue) {
  for (double tau : {0.7, 1.3, 2.0}) {
    const auto dec = decompose(build_superoperator(propagator_for(uniform_chain<double>(1, 1.0), tau)));
    const double t00 = twolevel::stay_probability(twolevel::TwoLevelParams<double>{1.0, 0.0, tau});
    double best = 1;
    for (const auto& z : dec.eigenvalues) best = std::min(best, std::abs(z - (2 * t00 - 1)));
    EXPECT_LE(best, 1e-12) << "tau = " << tau;
  }
}

TEST(Decompose, FlagsNearDefectiveMatrices) {
  Superoperator<double> s{2, Eigen::MatrixXcd::Zero(4, 4)};
  s.matrix(0, 0) = s.matrix(1, 1) = 0.5;
  s.matrix(0, 1) = 1.0;  // Jordan block
  s.matrix(3, 3) = 1.0;
  const auto dec = decompose(s);
  EXPECT_TRUE(dec.near_defective || dec.pairing_failed);
  EXPECT_FALSE(dec.usable());
  EXPECT_THROW(survival_spectral(dec, 10), std::logic_error);
}

TEST(SurvivalSpectral, MatchesDirectIteration) {
  std::mt19937_64 rng(127);
  for (Index n = 1; n <= 5; ++n)
    for (int trial = 0; trial < 4; ++trial) {
      const ModelSpec<double> spec{n, oracle::uniform(rng, 0.2, 1.5), 1.0, std::vector<double>(n, 0.0), std::nullopt};
      const double tau = oracle::uniform(rng, 0.1, 4);
      const auto h = build_hamiltonian(spec);
      const auto dec = decompose(build_superoperator(propagate(diagonalize(h), tau)));
      ASSERT_TRUE(dec.usable());
      const auto spectral = survival_spectral(dec, 100);
      const auto direct = oracle::survival_direct(oracle::unitary_taylor(h.matrix, tau), 100);
      EXPECT_NEAR(spectral[0], 1.0, 1e-8);
      for (std::size_t m = 0; m < direct.size(); ++m) ASSERT_NEAR(spectral[m], direct[m], 1e-8) << "N=" << n;
    }
}

TEST(SurvivalSpectral, ApproachesInverseDimension) {
  const auto dec = decompose(build_superoperator(propagator_for(uniform_chain<double>(9, 1.0), 0.5)));
  EXPECT_NEAR(survival_spectral(dec, 5000).back(), 0.1, 1e-8);
}

TEST(SurvivalSpectral, TwoLevelClosedForm) {
  for (double tau : {0.4, 1.0, 2.5}) {
    const auto dec = decompose(build_superoperator(propagator_for(uniform_chain<double>(1, 1.0), tau)));
    const auto p = survival_spectral(dec, 50);
    const twolevel::TwoLevelParams<double> params{1.0, 0.0, tau};
    for (long m = 0; m <= 50; ++m)
      EXPECT_NEAR(p[static_cast<std::size_t>(m)], twolevel::survival_closed_form(params, m), 1e-12);
  }
}

TEST(DecayRate, VanishesAsTauShrinksAndScalesQuadratically) {
  const auto spec = uniform_chain<double>(6, 1.0);
  const auto rate_at = [&](double tau) {
    return decay_rate(decompose(build_superoperator(propagator_for(spec, tau)), DecomposeMode::eigenvalues_only), 1.0);
  };
  const auto small = rate_at(0.01), mid = rate_at(0.02);
  ASSERT_TRUE(small.ok());
  EXPECT_LT(small.gamma_rate, 1e-4);
  EXPECT_NEAR(mid.gamma_rate / small.gamma_rate, 4.0, 0.05);
}

TEST(DecayRate, TwoLevelHalfPeriod) {
  const auto dec = decompose(build_superoperator(propagator_for(uniform_chain<double>(1, 1.0), kPi / 2)));
  bool has_minus_one = false;
  for (const auto& z : dec.eigenvalues) has_minus_one |= std::abs(z + 1.0) < 1e-12;
  EXPECT_TRUE(has_minus_one);
  const auto rate = decay_rate(dec, 1.0);
  EXPECT_EQ(dec.unit_multiplicity, 1);
  EXPECT_LT(rate.lambda1_modulus, 1e-12);
  EXPECT_TRUE(std::isinf(rate.raw_rate));
}

TEST(DecayRate, FlagsDegenerateStationaryState) {
  const auto dec = decompose(build_superoperator(propagator_for(ModelSpec<double>{4, 0.0, 1.0, {}, 2}, 1.0)));
  const auto rate = decay_rate(dec, 0.0);
  EXPECT_TRUE(rate.flags & rate_degenerate_stationary);
  EXPECT_TRUE(rate.flags & rate_zero_coupling);
  EXPECT_TRUE(std::isnan(rate.gamma_rate));
  EXPECT_EQ(rate_flags_to_string(rate.flags), "zero_coupling|degenerate_stationary");
}

TEST(DecayRate, ReportsRawAndScaled) {
  const auto dec = decompose(build_superoperator(propagator_for(uniform_chain<double>(5, 0.5), 0.6)));
  const auto rate = decay_rate(dec, 0.5);
  ASSERT_TRUE(rate.ok());
  EXPECT_NEAR(rate.raw_rate, -std::log(rate.lambda1_modulus), 1e-15);
  EXPECT_NEAR(rate.gamma_rate, rate.raw_rate / 0.25, 1e-15);
}

TEST(RateScan, RowsFollowGridAndThreadCountDoesNotMatter) {
  const auto spec = uniform_chain<double>(4, 0.75);
  std::vector<double> grid;
  for (int k = 1; k <= 12; ++k) grid.push_back(0.25 * k);
  const auto serial = rate_scan(spec, grid, 1);
  const auto parallel = rate_scan(spec, grid, 4);
  ASSERT_EQ(serial.size(), grid.size());
  const double t_star = tau_star(diagonalize(build_hamiltonian(spec)));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_EQ(serial[k].tau, grid[k]);
    EXPECT_NEAR(serial[k].tau_tilde, grid[k] / t_star, 1e-15);
    EXPECT_EQ(serial[k].rate.gamma_rate, parallel[k].rate.gamma_rate);
    EXPECT_EQ(serial[k].rate.flags, parallel[k].rate.flags);
  }
  EXPECT_THROW(rate_scan(spec, {}, 1), std::invalid_argument);
  EXPECT_THROW(rate_scan(spec, {0.5, -1.0}, 1), std::invalid_argument);
}

TEST(RateScan, DecoupledDotFlagsEveryPoint) {
  const auto rows = rate_scan(ModelSpec<double>{4, 0.0, 1.0, {}, 1}, {0.3, 1.0, 2.0}, 1);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.rate.ok());
    EXPECT_TRUE(r.rate.flags & rate_degenerate_stationary);
  }
}

TEST(StationaryState, GenericParametersGiveMixedState) {
  auto dec = decompose(build_superoperator(propagator_for(uniform_chain<double>(9, 1.0), 1.0)));
  EXPECT_LE(deviation_from_mixed(stationary_state(dec)), 1e-8);

  dec = decompose(build_superoperator(propagator_for(ModelSpec<double>{4, 1.0, 1.0, {}, 2024}, 1.0)));
  EXPECT_LE(deviation_from_mixed(stationary_state(dec)), 1e-8);
}

TEST(StationaryState, RefusesDegenerateUnitEigenspace) {
  const auto dec = decompose(build_superoperator(propagator_for(ModelSpec<double>{4, 0.0, 1.0, {}, 2}, 1.0)));
  EXPECT_GT(dec.unit_multiplicity, 1);
  EXPECT_THROW(stationary_state(dec), std::domain_error);
}

TEST(ChainInvariant, DecoupledChain) {
  for (double tau : {0.3, 1.0, 4.4}) {
    const auto rep = chain_invariant_check(propagator_for(ModelSpec<double>{5, 0.0, 1.0, {}, 6}, tau));
    EXPECT_TRUE(rep.has_invariant_chain_state);
    EXPECT_GT(rep.unit_eigenspace_dimension_of_full_map, 1);
  }
}

TEST(ChainInvariant, TwoLevelFullPeriod) {
  const auto rep = chain_invariant_check(propagator_for(uniform_chain<double>(1, 1.0), 2 * kPi));
  EXPECT_TRUE(rep.has_invariant_chain_state);
  EXPECT_EQ(rep.unit_eigenspace_dimension_of_full_map, 2);
}

TEST(ChainInvariant, GenericUniformChain) {
  const auto rep = chain_invariant_check(propagator_for(uniform_chain<double>(9, 1.0), 1.0));
  EXPECT_FALSE(rep.has_invariant_chain_state);
  EXPECT_NEAR(rep.top_chain_eigenvalue_modulus, kTopChainModulusN9, 1e-10);
  EXPECT_EQ(rep.unit_eigenspace_dimension_of_full_map, 1);
}

TEST(ChainInvariant, EquivalentToFixedPointDegeneracy) {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rep = chain_invariant_check(random_propagator(rng, 6));
    EXPECT_EQ(rep.has_invariant_chain_state, rep.unit_eigenspace_dimension_of_full_map > 1);
  }
}
