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

#include <iosfwd>

#include "zenochain/config.hpp"

namespace zenochain {

/// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_error = 1,
  exit_not_unique = 3,  // check-stationary: more than one stationary state
};

int run_evolve(const RunConfig& cfg, std::ostream& log);
int run_tomography(const RunConfig& cfg, std::ostream& log);
int run_spectrum(const RunConfig& cfg, std::ostream& log);
int run_rate_scan(const RunConfig& cfg, std::ostream& log);
int run_two_level(const RunConfig& cfg, std::ostream& log);
int run_check_stationary(const RunConfig& cfg, std::ostream& log);

/// Dispatches on `cfg.command`.
int run(const RunConfig& cfg, std::ostream& log);

const char* version_stamp();

}  // namespace zenochain
