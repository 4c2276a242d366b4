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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zenochain/channel.hpp"
#include "zenochain/spectral.hpp"

namespace zenochain {

/// Fixed 17-significant-digit rendering used for every emitted number.
std::string format_number(double x);

/// Tracks files written for one run and deletes them (and the output
/// directory, if this session created it and it ends up empty) unless
/// `commit` is called.
class OutputSession {
 public:
  explicit OutputSession(std::filesystem::path dir);
  ~OutputSession();
  OutputSession(const OutputSession&) = delete;
  OutputSession& operator=(const OutputSession&) = delete;

  std::filesystem::path path(const std::string& name);
  void write_text(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const nlohmann::json& doc);
  void commit() noexcept { committed_ = true; }

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  bool created_dir_ = false;
  bool committed_ = false;
  std::vector<std::filesystem::path> written_;
};

// step,time,survival,offdiag_avg,diag_0..diag_N
std::string trajectory_csv(const std::vector<TrajectoryRecord<double>>& records);

// D rows of 2D values: real parts, then imaginary parts.
std::string snapshot_csv(const DensityMatrix<double>& rho);

// tau,tau_tilde,lambda1_modulus,gamma_rate,raw_rate,flags
std::string rates_csv(const std::vector<RateRow<double>>& rows);

// index,re,im,modulus,weight_re,weight_im
std::string spectrum_csv(const SpectralDecomposition<double>& dec);

}  // namespace zenochain
