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

// relaycap command line: sweep <config>, preset <fig2..fig8>, verify.
// Exit codes: 0 success, 2 configuration error, 3 every cell failed numerically.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "relaycap/experiment.hpp"
#include "relaycap/verify.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Master seed (overrides the config)");
  cmd->add_option("--trials", f.trials, "Monte-Carlo trials per cell (overrides the config)");
  cmd->add_option("--out", f.out, "CSV output path (default: stdout)");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
}

int run_spec(relaycap::SweepSpec spec, const CommonFlags& f) {
  if (f.seed) spec.master_seed = *f.seed;
  if (f.trials) spec.trials = *f.trials;
  spec.workers = f.threads;
  spec.validate();

  const auto table = relaycap::run_sweep(spec);
  if (f.out.empty()) {
    std::cout << relaycap::format_csv(table);
    if (!table.oracle.empty()) std::cout << '\n' << relaycap::format_oracle_csv(table);
  } else {
    relaycap::emit_csv(table, f.out);
    if (!table.oracle.empty()) relaycap::emit_oracle_csv(table, f.out + ".oracle.csv");
  }
  std::size_t failed = 0;
  for (const auto& r : table.rows)
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "cell " << r.scheme << " @ " << r.axis_value << ": " << r.error << '\n';
    }
  if (table.all_failed()) return kExitNumeric;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaycap: ergodic and asymptotic capacity of beamformed MIMO multi-relay networks"};
  app.require_subcommand(1);

  CommonFlags sweep_flags, preset_flags;
  std::string config_path, preset_name;
  std::uint64_t verify_seed = 1;

  auto* sweep = app.add_subcommand("sweep", "Run a sweep from a key = value config file");
  sweep->add_option("config", config_path, "Config file")->required();
  add_common(sweep, sweep_flags);

  auto* preset = app.add_subcommand("preset", "Run a built-in figure preset");
  preset->add_option("name", preset_name, "fig2 .. fig8")->required();
  add_common(preset, preset_flags);

  auto* verify = app.add_subcommand("verify", "Run the moment, nesting and oracle self-checks");
  verify->add_option("--seed", verify_seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sweep) return run_spec(relaycap::parse_config(config_path), sweep_flags);
    if (*preset) return run_spec(relaycap::parse_config(relaycap::preset_path(preset_name)), preset_flags);
    if (*verify) {
      bool all = true;
      for (const auto& c : relaycap::run_self_checks(verify_seed)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        all = all && c.passed;
      }
      return all ? 0 : kExitNumeric;
    }
  } catch (const relaycap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
