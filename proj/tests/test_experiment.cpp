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

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "relaycap/experiment.hpp"

using namespace relaycap;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("relaycap_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// (scheme -> axis -> column value) for quick lookups.
std::map<std::string, std::map<double, ResultRow>> index_rows(const ResultTable& t) {
  std::map<std::string, std::map<double, ResultRow>> out;
  for (const auto& r : t.rows) out[r.scheme][r.axis_value] = r;
  return out;
}

}  // namespace

TEST_CASE("minimal config gets documented defaults", "[config]") {
  const auto spec = parse_config_text("M = 4\nN = 6\nK = 5..80\nscheme = MF\n");
  CHECK(spec.axis == SweepAxis::k);
  REQUIRE(spec.axis_values.size() == 76);
  CHECK(spec.axis_values.front() == 5.0);
  CHECK(spec.axis_values.back() == 80.0);
  CHECK(spec.trials == 1000);
  CHECK(spec.master_seed == 1);
  CHECK(spec.pnr_db == 10.0);
  CHECK(spec.qnr_db == 10.0);
  CHECK(spec.base.p == Catch::Approx(10.0).epsilon(1e-15));
  CHECK(spec.base.q == Catch::Approx(10.0).epsilon(1e-15));
  CHECK(spec.base.sigma1_sq == 1.0);
  CHECK(spec.base.sigma2_sq == 1.0);
  CHECK(spec.schemes == std::vector<Scheme>{Scheme::mf});
  CHECK(spec.asymptotic_schemes.empty());
  CHECK_FALSE(spec.emit_oracle);
  CHECK(spec.power == PowerControl::exact);
}

TEST_CASE("fig2 preset", "[config][preset]") {
  const auto spec = parse_config(preset_path("fig2"));
  CHECK(spec.axis == SweepAxis::k);
  CHECK(spec.axis_values == std::vector<double>{1, 2, 5, 10, 20, 40, 80});
  CHECK(spec.base.m == 4);
  CHECK(spec.base.n == 6);
  CHECK(spec.pnr_db == 10.0);
  CHECK(spec.qnr_db == 10.0);
  CHECK(spec.base.alpha == 0.5);
  CHECK(std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::mf_rzf_fixed) != spec.schemes.end());
}

TEST_CASE("every preset parses", "[config][preset]") {
  for (const auto& name : preset_names()) CHECK_NOTHROW(parse_config(preset_path(name)));
  CHECK_THROWS_AS(preset_path("fig9"), ConfigError);
  const auto fig8 = parse_config(preset_path("fig8"));
  CHECK(fig8.sigma_q == 0.05);
  CHECK(fig8.sigma_d == 0.005);
  CHECK(fig8.axis == SweepAxis::k_dynamic_e);
  const auto fig6 = parse_config(preset_path("fig6"));
  CHECK(fig6.base.m == 2);
  CHECK(fig6.base.n == 4);
  CHECK(fig6.base.e == 0.1);
  CHECK(fig6.axis == SweepAxis::qnr);
}

TEST_CASE("config rejections", "[config]") {
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 3\nK = 1, 2\nschemes = MF\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 1, 2\nschemes = MF\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 2, 1\nschemes = MF\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 1, 2\nschemes = MF, ZF\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 1, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 20\nschemes = MF\n"), ConfigError);  // no axis
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 1, 2\nschemes = MF\ntrials = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 1, 2\nschemes = MF\nM = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 6\nK = 1, 2\nschemes = MF\nPNR = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("just a line\n"), ConfigError);
  // MF-ZF closed form at N = M.
  CHECK_THROWS_AS(parse_config_text("M = 4\nN = 4\nK = 1, 2\nschemes = MF, MF-ZF\nasymptotic = true\n"), ConfigError);
  CHECK_NOTHROW(parse_config_text("M = 4\nN = 4\nK = 1, 2\nschemes = MF, MF-ZF\nasymptotic = MF\n"));
  CHECK_THROWS_AS(parse_config(temp_path("does_not_exist.cfg")), ConfigError);
}

TEST_CASE("lists, ranges and comments", "[config]") {
  const auto spec = parse_config_text(
      "# header\nM = 2 # trailing\nN = 4\nK = 10\naxis = e_sq\nvalues = 0..0.05:0.01, 0.1\n"
      "schemes = MF,MF-RZF-opt\nseed = 18446744073709551615\n");
  REQUIRE(spec.axis_values.size() == 7);
  CHECK(spec.axis_values[5] == Catch::Approx(0.05).margin(1e-15));
  CHECK(spec.axis_values[6] == 0.1);
  CHECK(spec.master_seed == 18446744073709551615ull);
  CHECK(spec.base.k == 10);
}

TEST_CASE("point configuration per axis", "[sweep]") {
  auto spec = parse_config_text("M = 4\nN = 6\nK = 20\naxis = PNR_eq_QNR\nvalues = 0, 20\nschemes = MF\n");
  auto cfg = point_config(spec, 20.0, {false, 0.1});
  CHECK(cfg.p == Catch::Approx(100.0).epsilon(1e-14));
  CHECK(cfg.q == Catch::Approx(100.0).epsilon(1e-14));
  CHECK(cfg.e == 0.1);
  spec = parse_config_text("M = 4\nN = 6\naxis = K_dynamic_e\nvalues = 2, 10\nschemes = MF\n");
  cfg = point_config(spec, 10.0, spec.series.front());
  CHECK(cfg.k == 10);
  CHECK(cfg.e == Catch::Approx(0.1).epsilon(1e-14));
  spec = parse_config_text("M = 4\nN = 6\nK = 20\naxis = e_sq\nvalues = 0, 0.04\nschemes = MF\n");
  CHECK(point_config(spec, 0.04, {}).e == Catch::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("CSV schema and determinism", "[csv][determinism]") {
  auto spec = parse_config_text(
      "M = 2\nN = 4\nK = 2, 4\nschemes = MF, MF-ZF, MF-RZF-fixed, MF-RZF-opt, MF-RZF-conventional, AF-cutset\n"
      "asymptotic = true\ntrials = 100\neigen_samples = 1000\ne = 0.1\n");
  const auto a = run_sweep(spec);
  const auto text = format_csv(a);
  CHECK(text.rfind("axis,scheme,ergodic,ci,asymptotic,cutset,alpha,flagged\n", 0) == 0);
  CHECK(a.rows.size() == 12);

  const auto p1 = temp_path("a.csv"), p2 = temp_path("b.csv");
  emit_csv(a, p1);
  spec.workers = 2;
  emit_csv(run_sweep(spec), p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1) == text);

  const auto rows = index_rows(a);
  const auto& cut = rows.at("AF-cutset").at(2.0);
  CHECK(cut.ergodic == cut.cutset);
  CHECK_FALSE(cut.asymptotic);
  CHECK_FALSE(rows.at("MF").at(2.0).alpha);
  CHECK(*rows.at("MF-RZF-conventional").at(2.0).alpha == Catch::Approx(0.2).epsilon(1e-14));
  CHECK(*rows.at("MF-RZF-fixed").at(4.0).alpha == 0.5);

  // 12 significant digits, '.' decimal.
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  const auto comma = line.find(',', line.find(',') + 1);
  const auto next = line.find(',', comma + 1);
  const std::string ergodic = line.substr(comma + 1, next - comma - 1);
  CHECK(ergodic.find('.') != std::string::npos);
  CHECK(ergodic.size() <= 13);
}

TEST_CASE("CSV emission errors", "[csv]") {
  const auto target = temp_path("never_created.csv");
  std::filesystem::remove(target);
  CHECK_THROWS_AS(emit_csv(ResultTable{}, target), std::invalid_argument);
  CHECK_FALSE(std::filesystem::exists(target));
  ResultTable t;
  t.rows.push_back({});
  CHECK_THROWS_AS(emit_csv(t, "/nonexistent-dir/x/y.csv"), std::runtime_error);
}

TEST_CASE("failed cells carry an error marker", "[csv][sweep]") {
  ResultTable t;
  ResultRow ok;
  ok.axis_value = 1;
  ok.scheme = "MF";
  ok.ergodic = 1.5;
  ResultRow bad;
  bad.axis_value = 1;
  bad.scheme = "MF-ZF";
  bad.error = "singular";
  t.rows = {ok, bad};
  const auto text = format_csv(t);
  CHECK(text.find("1,MF-ZF,error,error,error,error,error,0\n") != std::string::npos);
  CHECK(text.find("1,MF,1.5,,,,,0\n") != std::string::npos);
  CHECK_FALSE(t.all_failed());
  t.rows = {bad};
  CHECK(t.all_failed());
}

TEST_CASE("series labels and oracle output", "[sweep]") {
  const auto spec = parse_config_text(
      "M = 2\nN = 4\nK = 3\naxis = PNR\nvalues = 0, 10\ne = 0, 0.1\nschemes = MF\ntrials = 100\n"
      "oracle = true\noracle_draws = 2\noracle_symbols = 1000\n");
  const auto t = run_sweep(spec);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows[0].scheme == "MF[e=0]");
  CHECK(t.rows[3].scheme == "MF[e=0.1]");
  REQUIRE(t.oracle.size() == 4);
  CHECK(t.oracle[0].draws == 2);
  CHECK(format_oracle_csv(t).rfind("axis,scheme,draws,median_gap,max_gap\n", 0) == 0);
}

TEST_CASE("optimized RZF leads MF along an e^2 sweep", "[sweep]") {
  auto spec = parse_config(preset_path("fig5"));
  spec.trials = 200;
  spec.eigen_samples = 2000;
  const auto rows = index_rows(run_sweep(spec));
  for (double x : spec.axis_values) {
    CHECK(*rows.at("MF-RZF-opt").at(x).ergodic >= *rows.at("MF").at(x).ergodic - 0.05);
    CHECK(*rows.at("MF-RZF-opt").at(x).asymptotic >= *rows.at("MF").at(x).asymptotic);
  }
}

TEST_CASE("PNR=QNR sweep: growth at e=0, saturation with error", "[sweep]") {
  auto spec = parse_config(preset_path("fig7"));
  spec.trials = 100;
  spec.eigen_samples = 2000;
  const auto t = run_sweep(spec);
  const auto rows = index_rows(t);
  for (const char* s : {"MF", "MF-ZF", "MF-RZF-opt"}) {
    const auto& perfect = rows.at(std::string(s) + "[e=0]");
    const auto& noisy = rows.at(std::string(s) + "[e=0.2]");
    double prev = -1.0;
    for (const auto& [x, r] : perfect) {
      CHECK(*r.asymptotic > prev);
      prev = *r.asymptotic;
    }
    CHECK(*perfect.at(40.0).asymptotic - *perfect.at(30.0).asymptotic > 3.0);
    CHECK(*noisy.at(40.0).asymptotic - *noisy.at(30.0).asymptotic < 0.2);
  }
}

TEST_CASE("dynamic-error sweep has an interior optimum", "[sweep]") {
  const auto spec = parse_config(preset_path("fig8"));
  const auto rows = index_rows(run_sweep(spec));
  for (const char* s : {"MF", "MF-ZF", "MF-RZF-opt"}) {
    const auto& series = rows.at(std::string(s) + "[e=dynamic]");
    double best = -1.0, arg = 0.0;
    for (const auto& [k, r] : series)
      if (*r.asymptotic > best) {
        best = *r.asymptotic;
        arg = k;
      }
    CHECK(arg > spec.axis_values.front());
    CHECK(arg < spec.axis_values.back());
    CHECK_FALSE(series.begin()->second.ergodic);
  }
}
