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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "zenochain/model.hpp"

namespace zenochain {

enum class Command { evolve, tomography, spectrum, rate_scan, two_level, check_stationary };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

enum class GridSpacing { linear, log };
enum class GridUnits { tau, tau_tilde };

struct TauGrid {
  double start = 0;
  double stop = 0;
  long count = 0;
  GridSpacing spacing = GridSpacing::linear;
  GridUnits units = GridUnits::tau;
};

/// Grid points in the grid's own units, start and stop included.
std::vector<double> expand_grid(const TauGrid& grid);

/// Everything a run needs. `model.epsilons` always holds the resolved
/// on-site energies once the config has been loaded.
struct RunConfig {
  Command command = Command::evolve;
  ModelSpec<double> model;
  std::string epsilon_source = "uniform";  // uniform | explicit | random
  std::optional<double> tau;
  std::optional<TauGrid> tau_grid;
  long n_steps = 0;
  std::vector<long> snapshots;
  std::filesystem::path output_dir = "zenochain-out";
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a config document. When `command` is given it must
/// agree with the document's own "command" key, if any.
RunConfig parse_config(const nlohmann::json& doc, std::optional<Command> command = std::nullopt);
RunConfig load_config(const std::filesystem::path& file, std::optional<Command> command = std::nullopt);

/// Resolved config in the same schema `parse_config` accepts.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace zenochain
