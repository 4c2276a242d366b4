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

#include "zenochain/commands.hpp"

#include <ostream>
#include <sstream>

#include "zenochain/channel.hpp"
#include "zenochain/output.hpp"
#include "zenochain/propagator.hpp"
#include "zenochain/spectral.hpp"
#include "zenochain/twolevel.hpp"

#ifndef ZENOCHAIN_VERSION
#define ZENOCHAIN_VERSION "unknown"
#endif

namespace zenochain {
namespace {

using nlohmann::json;

// JSON has no NaN or infinity; those become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json meta_document(const RunConfig& cfg, json summary) {
  json doc = to_json(cfg);
  doc["provenance"] = {{"version", version_stamp()},
                       {"epsilon_source", cfg.epsilon_source},
                       {"dimension", cfg.model.dim()},
                       {"summary", std::move(summary)}};
  return doc;
}

int run_trajectory(const RunConfig& cfg, std::ostream& log) {
  const auto u = propagator_for(cfg.model, *cfg.tau);
  std::vector<Index> snaps(cfg.snapshots.begin(), cfg.snapshots.end());
  const auto traj = evolve(u, cfg.n_steps, std::span<const Index>(snaps));

  const auto& last = traj.records.back();
  json summary{{"final_survival", last.survival},
               {"final_offdiag_avg", last.offdiag_avg},
               {"final_time", last.time}};
  if (cfg.model.n_chain >= 20) {
    const auto front = front_velocity(traj.records);
    summary["front_velocity"] = front.ok ? number(front.velocity) : json(nullptr);
    if (!front.ok) summary["front_velocity_failure"] = front.reason;
  }

  OutputSession out(cfg.output_dir);
  out.write_text("trajectory.csv", trajectory_csv(traj.records));
  for (const auto& [m, rho] : traj.snapshots)
    out.write_text("rho_snapshot_" + std::to_string(m) + ".csv", snapshot_csv(rho));
  out.write_json("meta.json", meta_document(cfg, std::move(summary)));
  out.commit();

  log << command_name(cfg.command) << ": " << traj.records.size() << " records, survival at T = "
      << format_number(last.time) << " is " << format_number(last.survival) << "\n";
  return exit_ok;
}

}  // namespace

const char* version_stamp() { return "zenochain " ZENOCHAIN_VERSION; }

int run_evolve(const RunConfig& cfg, std::ostream& log) { return run_trajectory(cfg, log); }

int run_tomography(const RunConfig& cfg, std::ostream& log) { return run_trajectory(cfg, log); }

int run_spectrum(const RunConfig& cfg, std::ostream& log) {
  const auto u = propagator_for(cfg.model, *cfg.tau);
  const auto dec = decompose(build_superoperator(u));
  const auto rate = decay_rate(dec, cfg.model.gamma);

  json summary{{"condition_number", number(dec.condition_number)},
               {"near_defective", dec.near_defective},
               {"pairing_failed", dec.pairing_failed},
               {"degenerate_clusters", dec.degenerate_clusters},
               {"unit_multiplicity", dec.unit_multiplicity},
               {"biorthogonality_error", number(biorthogonality_error(dec))},
               {"lambda1_modulus", rate.lambda1_modulus},
               {"raw_rate", number(rate.raw_rate)},
               {"gamma_rate", number(rate.gamma_rate)},
               {"rate_flags", rate_flags_to_string(rate.flags)}};

  OutputSession out(cfg.output_dir);
  out.write_text("spectrum.csv", spectrum_csv(dec));
  if (cfg.n_steps > 0) {
    std::vector<double> survival;
    std::string source;
    if (dec.usable()) {
      survival = survival_spectral(dec, cfg.n_steps);
      source = "spectral";
    } else {
      for (const auto& r : evolve(u, cfg.n_steps).records) survival.push_back(r.survival);
      source = "direct";
    }
    std::ostringstream csv;
    csv << "step,time,survival,source\n";
    for (std::size_t m = 0; m < survival.size(); ++m)
      csv << m << ',' << format_number(static_cast<double>(m) * *cfg.tau) << ',' << format_number(survival[m]) << ','
          << source << '\n';
    out.write_text("survival.csv", csv.str());
    summary["survival_source"] = source;
  }
  out.write_json("meta.json", meta_document(cfg, std::move(summary)));
  out.commit();

  log << "spectrum: " << dec.eigenvalues.size() << " eigenvalues, |lambda_1| = " << format_number(rate.lambda1_modulus)
      << ", condition number " << format_number(dec.condition_number) << "\n";
  return exit_ok;
}

int run_rate_scan(const RunConfig& cfg, std::ostream& log) {
  const auto& grid = *cfg.tau_grid;
  auto taus = expand_grid(grid);
  if (grid.units == GridUnits::tau_tilde) {
    const auto eig = diagonalize(build_hamiltonian(cfg.model));
    if (!(spectral_width(eig) > 0)) throw ConfigError("tau_grid in tau_tilde units needs a non-zero spectral width");
    const double t_star = tau_star(eig);
    for (auto& t : taus) t *= t_star;
  }
  const auto rows = rate_scan(cfg.model, taus, cfg.threads);

  std::size_t flagged = 0;
  for (const auto& r : rows) flagged += r.rate.ok() ? 0 : 1;
  json summary{{"points", rows.size()}, {"flagged_points", flagged}};

  OutputSession out(cfg.output_dir);
  out.write_text("rates.csv", rates_csv(rows));
  out.write_json("meta.json", meta_document(cfg, std::move(summary)));
  out.commit();

  log << "rate-scan: " << rows.size() << " points, " << flagged << " flagged\n";
  return exit_ok;
}

int run_two_level(const RunConfig& cfg, std::ostream& log) {
  const twolevel::TwoLevelParams<double> p{cfg.model.gamma, cfg.model.epsilons.at(0), *cfg.tau};
  const auto records = evolve(cfg.model, *cfg.tau, cfg.n_steps);

  std::ostringstream csv;
  csv << "step,time,closed_form,numerical,abs_diff\n";
  double worst = 0;
  for (const auto& r : records) {
    const double closed = twolevel::survival_closed_form(p, static_cast<long>(r.step));
    const double diff = std::abs(closed - r.survival);
    worst = std::max(worst, diff);
    csv << r.step << ',' << format_number(r.time) << ',' << format_number(closed) << ',' << format_number(r.survival)
        << ',' << format_number(diff) << '\n';
  }
  json summary{{"omega", twolevel::omega(p)},
               {"t00", twolevel::stay_probability(p)},
               {"max_abs_diff", worst}};

  OutputSession out(cfg.output_dir);
  out.write_text("two_level.csv", csv.str());
  out.write_json("meta.json", meta_document(cfg, std::move(summary)));
  out.commit();

  log << "two-level: T00 = " << format_number(twolevel::stay_probability(p)) << ", max |closed - numerical| = "
      << format_number(worst) << "\n";
  return exit_ok;
}

int run_check_stationary(const RunConfig& cfg, std::ostream& log) {
  const auto u = propagator_for(cfg.model, *cfg.tau);
  const auto rep = chain_invariant_check(u);
  const bool unique = rep.unit_eigenspace_dimension_of_full_map == 1;

  json doc{{"has_invariant_chain_state", rep.has_invariant_chain_state},
           {"top_chain_eigenvalue_modulus", rep.top_chain_eigenvalue_modulus},
           {"unit_eigenspace_dimension_of_full_map", rep.unit_eigenspace_dimension_of_full_map},
           {"unique", unique},
           {"consistent", rep.has_invariant_chain_state == !unique},
           {"n_chain", cfg.model.n_chain},
           {"gamma", cfg.model.gamma},
           {"tau", *cfg.tau}};
  if (unique) {
    const auto dec = decompose(build_superoperator(u));
    doc["stationary_deviation"] = deviation_from_mixed(stationary_state(dec));
  } else {
    doc["stationary_deviation"] = nullptr;
  }

  OutputSession out(cfg.output_dir);
  out.write_json("stationarity.json", doc);
  out.write_json("meta.json", meta_document(cfg, json{{"unique", unique}}));
  out.commit();

  log << "check-stationary: " << (unique ? "unique" : "not unique") << " (unit eigenspace dimension "
      << rep.unit_eigenspace_dimension_of_full_map << ", top chain |eigenvalue| "
      << format_number(rep.top_chain_eigenvalue_modulus) << ")\n";
  return unique ? exit_ok : exit_not_unique;
}

int run(const RunConfig& cfg, std::ostream& log) {
  switch (cfg.command) {
    case Command::evolve: return run_evolve(cfg, log);
    case Command::tomography: return run_tomography(cfg, log);
    case Command::spectrum: return run_spectrum(cfg, log);
    case Command::rate_scan: return run_rate_scan(cfg, log);
    case Command::two_level: return run_two_level(cfg, log);
    case Command::check_stationary: return run_check_stationary(cfg, log);
  }
  return exit_error;
}

}  // namespace zenochain
