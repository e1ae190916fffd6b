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
#include <string>
#include <vector>

namespace relaycap {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick self-check of the Omega moment identities, Wishart moments,
/// scheme nesting, power closure and closed-form vs oracle SINR.
/// Runs in well under a minute on one core.
std::vector<CheckResult> run_self_checks(std::uint64_t seed);

}  // namespace relaycap
