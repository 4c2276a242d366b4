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

#include "zenochain/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

namespace zenochain {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommands{{
    {Command::evolve, "evolve"},
    {Command::tomography, "tomography"},
    {Command::spectrum, "spectrum"},
    {Command::rate_scan, "rate-scan"},
    {Command::two_level, "two-level"},
    {Command::check_stationary, "check-stationary"},
}};

void reject_unknown_keys(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + std::string(key) + "' in " + where + " is missing or has the wrong type");
  }
}

double positive(double x, const char* what) {
  if (!(x > 0) || !std::isfinite(x)) throw ConfigError(std::string(what) + " must be a positive number");
  return x;
}

TauGrid parse_grid(const json& g) {
  if (!g.is_object()) throw ConfigError("'tau_grid' must be an object");
  reject_unknown_keys(g, {"start", "stop", "count", "spacing", "units"}, "tau_grid");
  TauGrid grid;
  grid.start = positive(get<double>(g, "start", "tau_grid"), "tau_grid.start");
  grid.stop = positive(get<double>(g, "stop", "tau_grid"), "tau_grid.stop");
  grid.count = get<long>(g, "count", "tau_grid");
  if (grid.count < 1) throw ConfigError("tau_grid.count must be at least 1 (empty grid)");
  if (grid.count > 1 && !(grid.stop > grid.start)) throw ConfigError("tau_grid.stop must exceed tau_grid.start");
  const auto spacing = g.value("spacing", std::string("linear"));
  if (spacing == "linear") grid.spacing = GridSpacing::linear;
  else if (spacing == "log") grid.spacing = GridSpacing::log;
  else throw ConfigError("tau_grid.spacing must be 'linear' or 'log'");
  const auto units = g.value("units", std::string("tau"));
  if (units == "tau") grid.units = GridUnits::tau;
  else if (units == "tau_tilde") grid.units = GridUnits::tau_tilde;
  else throw ConfigError("tau_grid.units must be 'tau' or 'tau_tilde'");
  return grid;
}

void parse_model(const json& m, RunConfig& cfg) {
  if (!m.is_object()) throw ConfigError("'model' must be an object");
  reject_unknown_keys(m, {"n_chain", "gamma", "gamma_c", "epsilons", "epsilon_seed"}, "model");
  auto& spec = cfg.model;
  spec.n_chain = get<long>(m, "n_chain", "model");
  if (spec.n_chain < 1) throw ConfigError("model.n_chain must be at least 1");
  spec.gamma = m.contains("gamma") ? get<double>(m, "gamma", "model") : 1.0;
  spec.gamma_c = m.contains("gamma_c") ? get<double>(m, "gamma_c", "model") : 1.0;
  if (!(spec.gamma >= 0) || !std::isfinite(spec.gamma)) throw ConfigError("model.gamma must be non-negative");
  positive(spec.gamma_c, "model.gamma_c");

  std::optional<std::uint64_t> eps_seed;
  if (m.contains("epsilon_seed")) eps_seed = get<std::uint64_t>(m, "epsilon_seed", "model");

  spec.epsilons.clear();
  spec.epsilon_seed.reset();
  if (!m.contains("epsilons") || m.at("epsilons").is_null()) {
    cfg.epsilon_source = "uniform";
    spec.epsilons.assign(static_cast<std::size_t>(spec.n_chain), 0.0);
  } else if (m.at("epsilons").is_string()) {
    if (m.at("epsilons").get<std::string>() != "random")
      throw ConfigError("model.epsilons must be a list of numbers or the string \"random\"");
    cfg.epsilon_source = "random";
    spec.epsilon_seed = eps_seed.value_or(cfg.seed);
    spec.epsilons = random_onsite_energies<double>(spec.n_chain, *spec.epsilon_seed);
  } else {
    cfg.epsilon_source = "explicit";
    spec.epsilons = get<std::vector<double>>(m, "epsilons", "model");
    spec.epsilon_seed = eps_seed;
    if (static_cast<Index>(spec.epsilons.size()) != spec.n_chain)
      throw ConfigError("model.epsilons has " + std::to_string(spec.epsilons.size()) + " entries but n_chain is " +
                        std::to_string(spec.n_chain));
    for (double e : spec.epsilons)
      if (!std::isfinite(e)) throw ConfigError("model.epsilons must be finite");
  }
}

void check_requirements(const RunConfig& cfg) {
  const auto name = std::string(command_name(cfg.command));
  const bool wants_grid = cfg.command == Command::rate_scan;
  if (wants_grid) {
    if (!cfg.tau_grid) throw ConfigError(name + " requires 'tau_grid'");
    if (cfg.tau) throw ConfigError(name + " takes 'tau_grid', not 'tau'");
  } else {
    if (!cfg.tau) throw ConfigError(name + " requires 'tau'");
    if (cfg.tau_grid) throw ConfigError(name + " takes 'tau', not 'tau_grid'");
  }

  switch (cfg.command) {
    case Command::evolve:
    case Command::tomography:
    case Command::two_level:
      if (cfg.n_steps < 1) throw ConfigError(name + " requires n_steps >= 1");
      break;
    case Command::spectrum:
      if (cfg.n_steps < 0) throw ConfigError("n_steps must be non-negative");
      break;
    case Command::rate_scan:
    case Command::check_stationary:
      break;
  }
  if (cfg.command == Command::tomography && cfg.snapshots.empty())
    throw ConfigError("tomography requires at least one entry in 'snapshots'");
  for (long s : cfg.snapshots)
    if (s < 0 || s > cfg.n_steps)
      throw ConfigError("snapshot step " + std::to_string(s) + " lies outside [0, n_steps]");
  if (cfg.command == Command::two_level) {
    if (cfg.model.n_chain != 1) throw ConfigError("two-level requires model.n_chain = 1");
    if (!(cfg.model.gamma > 0)) throw ConfigError("two-level requires model.gamma > 0");
  }
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, text] : kCommands)
    if (text == name) return cmd;
  return std::nullopt;
}

std::string_view command_name(Command command) {
  for (const auto& [cmd, text] : kCommands)
    if (cmd == command) return text;
  return "unknown";
}

std::vector<double> expand_grid(const TauGrid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.count));
  if (grid.count == 1) {
    out[0] = grid.start;
    return out;
  }
  const double last = static_cast<double>(grid.count - 1);
  for (long k = 0; k < grid.count; ++k) {
    const double f = static_cast<double>(k) / last;
    out[static_cast<std::size_t>(k)] = grid.spacing == GridSpacing::linear
                                           ? grid.start + f * (grid.stop - grid.start)
                                           : grid.start * std::pow(grid.stop / grid.start, f);
  }
  out.back() = grid.stop;
  return out;
}

RunConfig parse_config(const json& doc, std::optional<Command> command) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"command", "model", "tau", "tau_grid", "n_steps", "snapshots", "output_dir", "seed", "threads",
                       "provenance"},
                      "config");
  RunConfig cfg;
  if (doc.contains("command")) {
    const auto named = parse_command(get<std::string>(doc, "command", "config"));
    if (!named) throw ConfigError("unknown command '" + doc.at("command").get<std::string>() + "'");
    if (command && *command != *named)
      throw ConfigError("config is for '" + std::string(command_name(*named)) + "' but '" +
                        std::string(command_name(*command)) + "' was requested");
    cfg.command = *named;
  } else if (command) {
    cfg.command = *command;
  } else {
    throw ConfigError("no command given");
  }

  if (doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed", "config");
  if (doc.contains("threads")) cfg.threads = get<unsigned>(doc, "threads", "config");
  if (!doc.contains("model")) throw ConfigError("config requires 'model'");
  parse_model(doc.at("model"), cfg);

  if (doc.contains("tau")) cfg.tau = positive(get<double>(doc, "tau", "config"), "tau");
  if (doc.contains("tau_grid")) cfg.tau_grid = parse_grid(doc.at("tau_grid"));
  if (doc.contains("n_steps")) cfg.n_steps = get<long>(doc, "n_steps", "config");
  if (doc.contains("snapshots")) cfg.snapshots = get<std::vector<long>>(doc, "snapshots", "config");
  if (doc.contains("output_dir")) cfg.output_dir = get<std::string>(doc, "output_dir", "config");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir must not be empty");

  check_requirements(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file, std::optional<Command> command) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, command);
}

json to_json(const RunConfig& cfg) {
  json model{{"n_chain", cfg.model.n_chain},
             {"gamma", cfg.model.gamma},
             {"gamma_c", cfg.model.gamma_c},
             {"epsilons", cfg.model.epsilons}};
  if (cfg.model.epsilon_seed) model["epsilon_seed"] = *cfg.model.epsilon_seed;

  json doc{{"command", std::string(command_name(cfg.command))},
           {"model", std::move(model)},
           {"n_steps", cfg.n_steps},
           {"snapshots", cfg.snapshots},
           {"output_dir", cfg.output_dir.string()},
           {"seed", cfg.seed},
           {"threads", cfg.threads}};
  if (cfg.tau) doc["tau"] = *cfg.tau;
  if (cfg.tau_grid) {
    const auto& g = *cfg.tau_grid;
    doc["tau_grid"] = {{"start", g.start},
                       {"stop", g.stop},
                       {"count", g.count},
                       {"spacing", g.spacing == GridSpacing::log ? "log" : "linear"},
                       {"units", g.units == GridUnits::tau_tilde ? "tau_tilde" : "tau"}};
  }
  return doc;
}

}  // namespace zenochain
