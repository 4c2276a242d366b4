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

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "zenochain/commands.hpp"
#include "zenochain/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dot-chain lattice under repeated dot-occupancy measurements"};
  app.require_subcommand(1);
  app.set_version_flag("--version", zenochain::version_stamp());

  std::string config_file;
  std::string out_dir;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"evolve", "Iterate the measured dynamics and write trajectory.csv"},
      {"tomography", "Like evolve, with full density-matrix snapshots"},
      {"spectrum", "Eigenvalues of the measurement map and the spectral survival"},
      {"rate-scan", "Asymptotic decay rate over a grid of measurement intervals"},
      {"two-level", "Closed form against the numerics for a single chain level"},
      {"check-stationary", "Uniqueness of the stationary state (exit 3 if not unique)"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_file, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto command = zenochain::parse_command(app.get_subcommands().front()->get_name());
    auto cfg = zenochain::load_config(config_file, command);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return zenochain::run(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "zenochain: error: " << e.what() << "\n";
    return zenochain::exit_error;
  }
}
