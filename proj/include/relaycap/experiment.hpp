// SPDX-License-Identifier: Apache-2.0
//
// relaycap - capacity simulator for beamformed MIMO multi-relay networks
// Copyright (C) 2026 The relaycap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relaycap/beamforming.hpp"
#include "relaycap/capacity.hpp"

namespace relaycap {

/// Malformed or inconsistent sweep configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { k, e_sq, pnr, qnr, pnr_eq_qnr, k_dynamic_e };

enum class Scheme { mf, mf_zf, mf_rzf_fixed, mf_rzf_opt, mf_rzf_conventional, af_cutset };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Scheme scheme);
SweepAxis parse_axis(std::string_view name);
Scheme parse_scheme(std::string_view name);

/// Constant-e series, or the dynamic e = sigma_q + K sigma_d (K_dynamic_e axis only).
struct ErrorSeries {
  bool dynamic = false;
  double e = 0.0;
};

struct SweepSpec {
  NetworkConfig base;           ///< sigma1^2 = sigma2^2 = 1; P, Q from the dB keys
  double pnr_db = 10.0;
  double qnr_db = 10.0;
  SweepAxis axis = SweepAxis::k;
  std::vector<double> axis_values;
  std::vector<Scheme> schemes;
  std::vector<ErrorSeries> series;  ///< empty: single series at base.e
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  double sigma_q = 0.05;
  double sigma_d = 0.005;
  bool emit_ergodic = true;
  std::vector<Scheme> asymptotic_schemes;  ///< schemes that get the large-K closed form
  bool emit_oracle = false;
  std::size_t oracle_draws = 20;
  std::size_t oracle_symbols = 2000;
  PowerControl power = PowerControl::exact;
  std::size_t eigen_samples = kDefaultEigenSamples;
  int workers = 0;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment. Lists are comma
/// separated and may contain ranges `a..b` or `a..b:step`.
SweepSpec parse_config_text(std::string_view text);
SweepSpec parse_config(const std::filesystem::path& path);

/// Built-in figure presets: fig2 .. fig8.
std::vector<std::string> preset_names();
std::filesystem::path preset_path(std::string_view name);

struct ResultRow {
  double axis_value = 0.0;
  std::string scheme;  ///< scheme name, suffixed with [e=..] when several series run
  std::optional<double> ergodic;
  std::optional<double> ci;
  std::optional<double> asymptotic;
  std::optional<double> cutset;
  std::optional<double> alpha;
  std::size_t flagged = 0;
  std::string error;  ///< nonempty: the cell failed, numbers are absent
};

struct OracleRow {
  double axis_value = 0.0;
  std::string scheme;
  std::size_t draws = 0;
  double median_gap = 0.0;  ///< median |closed - oracle| / oracle over draws and streams
  double max_gap = 0.0;
};

struct ResultTable {
  SweepAxis axis = SweepAxis::k;
  std::vector<ResultRow> rows;
  std::vector<OracleRow> oracle;

  /// True when every row carries an error marker.
  bool all_failed() const;
};

/// Network configuration of one sweep point (before per-scheme alpha).
NetworkConfig point_config(const SweepSpec& spec, double axis_value, const ErrorSeries& series);

/// Runs every (series, axis value, scheme) cell. Failed cells carry an error
/// marker; the sweep never aborts on a numeric failure.
ResultTable run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kCsvHeader = "axis,scheme,ergodic,ci,asymptotic,cutset,alpha,flagged";
inline constexpr std::string_view kOracleCsvHeader = "axis,scheme,draws,median_gap,max_gap";
inline constexpr std::string_view kErrorMarker = "error";

std::string format_csv(const ResultTable& table);
std::string format_oracle_csv(const ResultTable& table);

/// Writes format_csv(table) to path. Throws std::invalid_argument on an
/// empty table (before touching the file system) and std::runtime_error
/// when the path cannot be written.
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
void emit_oracle_csv(const ResultTable& table, const std::filesystem::path& path);

}  // namespace relaycap
