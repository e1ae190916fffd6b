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

#include "relaycap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "relaycap/beamforming.hpp"
#include "relaycap/capacity.hpp"
#include "relaycap/channel.hpp"
#include "relaycap/receiver.hpp"

namespace relaycap {

namespace {

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CheckResult lemma_check(std::uint64_t seed) {
  constexpr std::size_t m = 4, n = 6, trials = 100000;
  RngStream setup(seed, 0, RngStream::Lane::lemma);
  const ComplexMatrix a = sample_cn01(setup, m, n);
  const ComplexMatrix b = a.adjoint();
  RngStream rng(seed, 1, RngStream::Lane::lemma);
  const auto dev = verify_lemmas(rng, trials, a, b);
  const double t = static_cast<double>(trials);
  const double na = frobenius_norm(a), nb = frobenius_norm(b), nc = frobenius_norm(b * a);
  // 3 x RMS of each deviation under the CLT.
  const double b1 = 3.0 * std::sqrt(m * n * na * na / t);
  const double b2 = 3.0 * na * nb / std::sqrt(t);
  const double b3 = 3.0 * std::sqrt(m * m * nc * nc / t);
  const bool ok = dev.first < b1 && dev.second < b2 && dev.third < b3;
  char buf[200];
  std::snprintf(buf, sizeof buf, "dev/bound = %.3f %.3f %.3f", dev.first / b1, dev.second / b2, dev.third / b3);
  return {"Omega moment identities (T=1e5)", ok, buf};
}

CheckResult wishart_check(std::uint64_t seed) {
  constexpr std::size_t m = 4, n = 6, draws = 10000;
  double inv_trace = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    RngStream rng(seed, i, RngStream::Lane::eigen);
    const ComplexMatrix g = sample_cn01(rng, m, n);
    inv_trace += trace(hermitian_pd_inverse(multiply_adjoint(g, g))).real();
    const ComplexMatrix hh = adjoint_multiply(g.adjoint(), g.adjoint());  // 4x4 Wishart with N=6
    const ComplexMatrix hh2 = hh * hh;
    for (std::size_t j = 0; j < m; ++j) diag += hh2(j, j).real();
  }
  inv_trace /= draws;
  diag /= static_cast<double>(draws * m);
  const bool ok = std::abs(inv_trace - 2.0) < 0.1 && std::abs(diag - 60.0) < 2.0;
  return {"Wishart moments (M=4, N=6)", ok, fmt("E tr (GG^H)^-1 = %.4f, E[(H^H H)^2]_mm = %.3f", inv_trace, diag)};
}

CheckResult nesting_closure_check(std::uint64_t seed) {
  NetworkConfig cfg;
  cfg.e = 0.1;
  double nest = 0.0, closure = 0.0;
  for (std::size_t d = 0; d < 100; ++d) {
    RngStream rng(seed, d);
    const auto real = draw_realization(cfg.m, cfg.n, 1, cfg.e, rng);
    const auto zf = build_beamformer(BeamformerKind::mf_zf, real.h[0], real.ghat[0], 0.0);
    const auto rzf0 = build_beamformer(BeamformerKind::mf_rzf, real.h[0], real.ghat[0], 0.0);
    nest = std::max(nest, max_abs_diff(zf, rzf0));
    for (auto kind : {BeamformerKind::mf, BeamformerKind::mf_zf, BeamformerKind::mf_rzf}) {
      const auto f = build_beamformer(kind, real.h[0], real.ghat[0], cfg.alpha);
      const double rho = exact_power_factor(f, real.h[0], cfg);
      closure = std::max(closure, std::abs(relay_output_power(f * rho, real.h[0], cfg) - cfg.q) / cfg.q);
    }
  }
  return {"nesting and power closure", nest <= 1e-12 && closure <= 1e-9,
          fmt("max |RZF(0) - ZF| = %.2e, max power error = %.2e", nest, closure)};
}

CheckResult oracle_check(std::uint64_t seed) {
  NetworkConfig cfg;
  cfg.k = 10;
  cfg.e = 0.1;
  std::vector<double> gaps;
  for (std::size_t d = 0; d < 5; ++d) {
    RngStream rng(seed, d);
    const auto real = draw_realization(cfg.m, cfg.n, cfg.k, cfg.e, rng);
    for (auto kind : {BeamformerKind::mf, BeamformerKind::mf_zf, BeamformerKind::mf_rzf}) {
      const auto rho = exact_power_factors(kind, real, cfg);
      const auto closed = post_snr(kind, real, rho, cfg);
      RngStream sym(seed, d, RngStream::Lane::symbols);
      const auto oracle = exact_snr_oracle(kind, real, cfg, 5000, sym);
      for (std::size_t s = 0; s < closed.streams(); ++s)
        gaps.push_back(std::abs(closed.gamma[s] - oracle.gamma[s]) / oracle.gamma[s]);
    }
  }
  std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
  const double med = gaps[gaps.size() / 2];
  return {"closed-form vs oracle SINR (e=0.1)", med < 0.15, fmt("median relative gap = %.4f (limit %.2f)", med, 0.15)};
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed) {
  return {lemma_check(seed), wishart_check(seed), nesting_closure_check(seed), oracle_check(seed)};
}

}  // namespace relaycap
