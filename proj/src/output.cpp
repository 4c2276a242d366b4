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

#include "zenochain/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace zenochain {

namespace fs = std::filesystem;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

OutputSession::OutputSession(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!fs::exists(dir_, ec)) {
    fs::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());
    created_dir_ = true;
  } else if (!fs::is_directory(dir_, ec)) {
    throw std::runtime_error("output path " + dir_.string() + " exists and is not a directory");
  }
}

OutputSession::~OutputSession() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& p : written_) fs::remove(p, ec);
  if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
}

fs::path OutputSession::path(const std::string& name) { return dir_ / name; }

void OutputSession::write_text(const std::string& name, const std::string& content) {
  const fs::path p = path(name);
  written_.push_back(p);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

void OutputSession::write_json(const std::string& name, const nlohmann::json& doc) {
  write_text(name, doc.dump(2) + "\n");
}

std::string trajectory_csv(const std::vector<TrajectoryRecord<double>>& records) {
  std::ostringstream out;
  out << "step,time,survival,offdiag_avg";
  const std::size_t d = records.empty() ? 0 : records.front().diag_profile.size();
  for (std::size_t i = 0; i < d; ++i) out << ",diag_" << i;
  out << '\n';
  for (const auto& r : records) {
    out << r.step << ',' << format_number(r.time) << ',' << format_number(r.survival) << ','
        << format_number(r.offdiag_avg);
    for (double p : r.diag_profile) out << ',' << format_number(p);
    out << '\n';
  }
  return out.str();
}

std::string snapshot_csv(const DensityMatrix<double>& rho) {
  std::ostringstream out;
  const Index d = rho.dim();
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) out << (j ? "," : "") << format_number(rho.matrix(i, j).real());
    for (Index j = 0; j < d; ++j) out << ',' << format_number(rho.matrix(i, j).imag());
    out << '\n';
  }
  return out.str();
}

std::string rates_csv(const std::vector<RateRow<double>>& rows) {
  std::ostringstream out;
  out << "tau,tau_tilde,lambda1_modulus,gamma_rate,raw_rate,flags\n";
  for (const auto& r : rows)
    out << format_number(r.tau) << ',' << format_number(r.tau_tilde) << ',' << format_number(r.rate.lambda1_modulus)
        << ',' << format_number(r.rate.gamma_rate) << ',' << format_number(r.rate.raw_rate) << ','
        << rate_flags_to_string(r.rate.flags) << '\n';
  return out.str();
}

std::string spectrum_csv(const SpectralDecomposition<double>& dec) {
  std::ostringstream out;
  out << "index,re,im,modulus,weight_re,weight_im\n";
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    const auto z = dec.eigenvalues[k];
    Complex<double> w = std::numeric_limits<double>::quiet_NaN();
    if (dec.has_modes()) w = dec.left_modes[k](0, 0) * dec.right_modes[k](0, 0);
    out << k << ',' << format_number(z.real()) << ',' << format_number(z.imag()) << ',' << format_number(std::abs(z))
        << ',' << format_number(w.real()) << ',' << format_number(w.imag()) << '\n';
  }
  return out.str();
}

}  // namespace zenochain
