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

#include <cmath>

#include "relaycap/capacity.hpp"
#include "support/oracles.hpp"

using namespace relaycap;

namespace {

const SchemeSetting kSchemes[] = {{BeamformerKind::mf, 0.0}, {BeamformerKind::mf_zf, 0.0}, {BeamformerKind::mf_rzf, 0.5}};

NetworkConfig fig_config(std::size_t k, double e) {
  NetworkConfig cfg;
  cfg.k = k;
  cfg.e = e;
  return cfg;
}

bool same(const CapacityEstimate& a, const CapacityEstimate& b) {
  return a.mean == b.mean && a.half_width == b.half_width && a.trials == b.trials && a.flagged_trials == b.flagged_trials;
}

}  // namespace

TEST_CASE("no relays means no capacity", "[capacity]") {
  auto cfg = fig_config(0, 0.0);
  const auto est = ergodic_capacity(BeamformerKind::mf, cfg, 100, 1);
  CHECK(est.mean == 0.0);
  CHECK(est.trials == 100);
}

TEST_CASE("parallel and serial runs are bit-identical", "[capacity][determinism]") {
  auto cfg = fig_config(6, 0.1);
  const auto serial = simulate_capacities_serial(kSchemes, cfg, 150, 9);
  for (int workers : {1, 2, 3, 8}) {
    CapacityOptions opts;
    opts.workers = workers;
    const auto par = simulate_capacities(kSchemes, cfg, 150, 9, opts);
    for (std::size_t s = 0; s < 3; ++s) CHECK(same(par.schemes[s], serial.schemes[s]));
    CHECK(same(par.cutset, serial.cutset));
  }
  const auto again = simulate_capacities(kSchemes, cfg, 150, 9);
  CHECK(same(again.schemes[0], serial.schemes[0]));
  const auto other = simulate_capacities(kSchemes, cfg, 150, 10);
  CHECK(other.schemes[0].mean != serial.schemes[0].mean);

  const auto pool_a = sample_wishart_eigenvalues(4, 6, 500, 3, 3);
  const auto pool_b = sample_wishart_eigenvalues_serial(4, 6, 500, 3);
  CHECK(pool_a.eigenvalues == pool_b.eigenvalues);
}

TEST_CASE("single-scheme entry points reuse the batch", "[capacity]") {
  auto cfg = fig_config(4, 0.1);
  cfg.alpha = 0.5;
  const auto batch = simulate_capacities(kSchemes, cfg, 120, 4);
  CHECK(same(ergodic_capacity(BeamformerKind::mf_rzf, cfg, 120, 4), batch.schemes[2]));
  CHECK(same(cutset_upper_bound(cfg, 120, 4), batch.cutset));
}

TEST_CASE("confidence half-width shrinks like 1/sqrt(trials)", "[capacity]") {
  auto cfg = fig_config(4, 0.1);
  const auto a = ergodic_capacity(BeamformerKind::mf, cfg, 1000, 5);
  const auto b = ergodic_capacity(BeamformerKind::mf, cfg, 4000, 5);
  CHECK(b.half_width / a.half_width == Catch::Approx(0.5).margin(0.1));
}

TEST_CASE("summary statistics", "[capacity]") {
  const double v[] = {1.0, 2.0, 3.0, 4.0};
  const auto est = summarize_trials(v, 1);
  CHECK(est.mean == 2.5);
  CHECK(est.half_width == Catch::Approx(1.959963984540054 * std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-14));
  CHECK(est.flagged_trials == 1);
}

TEST_CASE("cut-set bound special cases", "[capacity][cutset]") {
  SECTION("vanishing source power") {
    auto cfg = fig_config(5, 0.0);
    cfg.p = 1e-9;
    CHECK(cutset_upper_bound(cfg, 200, 1).mean < 1e-7);
  }
  SECTION("scalar network matches quadrature") {
    NetworkConfig cfg;
    cfg.m = cfg.n = cfg.k = 1;
    cfg.p = 10.0;
    const auto mc = cutset_upper_bound(cfg, 100000, 2);
    const double exact = oracle::scalar_cutset(cfg.p);
    CHECK(std::abs(mc.mean - exact) < mc.half_width * 3.0 / 1.96);
    // Closed form: e^{1/snr} E1(1/snr) / (2 ln 2), E1(x) = -Ei(-x).
    const double closed = std::exp(1.0 / cfg.p) * -std::expint(-1.0 / cfg.p) / (2.0 * std::log(2.0));
    CHECK(exact == Catch::Approx(closed).epsilon(1e-5));
  }
  SECTION("logdet route agrees with elimination") {
    auto cfg = fig_config(3, 0.0);
    RngStream rng(77, 0);
    const auto real = draw_realization(cfg.m, cfg.n, cfg.k, 0.0, rng);
    ComplexMatrix acc = oracle::eye(4);
    for (const auto& h : real.h) acc = oracle::add(acc, oracle::mul(oracle::herm(h), h), cfg.p / 4.0);
    const double direct = 0.5 * oracle::log_abs_det(acc) / std::log(2.0);
    CHECK(simulate_capacities_serial({}, cfg, 1, 77).cutset.mean == Catch::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("cut-set bound dominates every scheme", "[capacity][cutset]") {
  for (double e : {0.0, 0.1, 0.3}) {
    auto cfg = fig_config(10, e);
    const auto b = simulate_capacities(kSchemes, cfg, 200, 6);
    for (const auto& s : b.schemes) CHECK(s.mean < b.cutset.mean);
  }
}

TEST_CASE("average power factors", "[capacity][average]") {
  NetworkConfig cfg;  // M=4, N=6, P=Q=10
  const EigenExpectations none;
  CHECK(average_power_factor(BeamformerKind::mf, cfg, none) == Catch::Approx(std::sqrt(10.0 / 3744.0)).epsilon(1e-14));
  CHECK(average_power_factor(BeamformerKind::mf, cfg, none) == Catch::Approx(0.05168).margin(1e-5));
  // sqrt(Q (N-M) / (N (P(M+N) + M))). Dropping the 1/N gives 0.4385, which mis-scales the relay power.
  const double zf = average_power_factor(BeamformerKind::mf_zf, cfg, none);
  CHECK(zf == Catch::Approx(std::sqrt(20.0 / 624.0)).epsilon(1e-14));
  CHECK(zf * std::sqrt(6.0) == Catch::Approx(0.4385).margin(1e-4));

  auto square = cfg;
  square.n = 4;
  CHECK_THROWS_AS(average_power_factor(BeamformerKind::mf_zf, square, none), DomainError);
  CHECK_THROWS_AS(asymptotic_capacity(BeamformerKind::mf_zf, square, none), DomainError);

  auto a0 = cfg;
  a0.alpha = 0.0;
  const auto eig = eigen_expectations(a0, 10000, 1);
  CHECK(average_power_factor(BeamformerKind::mf_rzf, a0, eig) == Catch::Approx(zf).epsilon(0.1));
}

TEST_CASE("average factors invert the mean relay power", "[capacity][average]") {
  // Monte-Carlo E[tr F (P/M HH^H + I) F^H] against Q / rho^2.
  NetworkConfig cfg;
  cfg.alpha = 0.5;
  const auto pool = sample_wishart_eigenvalues(cfg.m, cfg.n, 10000, 2);
  for (auto kind : {BeamformerKind::mf, BeamformerKind::mf_zf, BeamformerKind::mf_rzf}) {
    constexpr int draws = 20000;
    double s = 0.0, ss = 0.0;
    for (int t = 0; t < draws; ++t) {
      RngStream rng(50, static_cast<std::uint64_t>(t));
      const auto real = draw_realization(cfg.m, cfg.n, 1, 0.0, rng);
      const double pw = relay_output_power(build_beamformer(kind, real.h[0], real.g[0], cfg.alpha), real.h[0], cfg);
      s += pw;
      ss += pw * pw;
    }
    const double mean = s / draws;
    const double se = std::sqrt((ss / draws - mean * mean) / draws);
    const double rho = average_power_factor(kind, cfg, expectations_at(pool, cfg.alpha));
    const double predicted = cfg.q / (rho * rho);
    // MF-ZF has a heavy inverse-Wishart tail, so allow a few extra standard errors plus 1%.
    CHECK(std::abs(mean - predicted) < 5.0 * se + 0.01 * predicted);
  }
}

TEST_CASE("large-K denominator moments at K = 1", "[capacity][asymptotic]") {
  // The closed forms rest on these Wishart expectations (M=4, N=6).
  constexpr int draws = 40000;
  double mf_ceg = 0, mf_relay = 0, zf_ceg = 0;
  double v1 = 0, v2 = 0, v3 = 0;
  for (int t = 0; t < draws; ++t) {
    RngStream rng(51, static_cast<std::uint64_t>(t));
    const auto real = draw_realization(4, 6, 1, 0.0, rng);
    const auto hh = adjoint_multiply(real.h[0], real.h[0]);
    const auto gg = multiply_adjoint(real.g[0], real.g[0]);
    const auto hh2 = hh * hh;
    const double a = trace(hh2).real() * gg(0, 0).real();
    const double b = (hh * gg * gg)(0, 0).real();
    const double c = trace_of_product(hh2, hermitian_pd_inverse(gg)).real();
    mf_ceg += a;
    mf_relay += b;
    zf_ceg += c;
    v1 += a * a;
    v2 += b * b;
    v3 += c * c;
  }
  auto check = [&](double sum, double sq, double target) {
    const double mean = sum / draws;
    const double se = std::sqrt((sq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - target) < 5.0 * se + 0.01 * target);
  };
  check(mf_ceg, v1, 4.0 * 36.0 * 10.0);  // M N^2 (M+N)
  check(mf_relay, v2, 36.0 * 10.0);      // N^2 (M+N)
  check(zf_ceg, v3, 4.0 * 6.0 * 10.0 / 2.0);  // M N (M+N) / (N-M)
}

TEST_CASE("asymptotic MF example", "[capacity][asymptotic]") {
  auto cfg = fig_config(20, 0.0);
  const double expected = 2.0 * std::log2(1.0 + 24000.0 / (800.0 / 6.0 + 416.0 / 60.0));
  CHECK(asymptotic_capacity(BeamformerKind::mf, cfg, {}) == Catch::Approx(expected).epsilon(1e-14));
  CHECK(expected == Catch::Approx(14.85).margin(0.01));
}

TEST_CASE("asymptotic capacities fall with e", "[capacity][asymptotic][property]") {
  NetworkConfig cfg;
  const auto pool = sample_wishart_eigenvalues(4, 6, 2000, 1);
  const auto eig = expectations_at(pool, cfg.alpha);
  for (auto kind : {BeamformerKind::mf, BeamformerKind::mf_zf, BeamformerKind::mf_rzf}) {
    double prev = 1e300;
    for (double e : {0.0, 0.05, 0.1, 0.3, 1.0, 3.0}) {
      cfg.e = e;
      const double c = asymptotic_capacity(kind, cfg, eig);
      CHECK(c < prev);
      prev = c;
    }
  }
}

TEST_CASE("asymptotic scaling law at e = 0", "[capacity][asymptotic]") {
  // Gain per doubling of K tends to M/2; the excess is O(1/K).
  NetworkConfig cfg;
  const auto pool = sample_wishart_eigenvalues(4, 6, 2000, 1);
  const auto eig = expectations_at(pool, cfg.alpha);
  for (auto kind : {BeamformerKind::mf, BeamformerKind::mf_zf, BeamformerKind::mf_rzf}) {
    double prev_gap = 1e9;
    for (std::size_t k = 20; k <= (std::size_t{1} << 15); k *= 2) {
      cfg.k = k;
      const double c1 = asymptotic_capacity(kind, cfg, eig);
      cfg.k = 2 * k;
      const double gap = std::abs(asymptotic_capacity(kind, cfg, eig) - c1 - 2.0);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < 0.01);
  }
}

TEST_CASE("MF-RZF closed form nests MF-ZF and MF", "[capacity][asymptotic]") {
  NetworkConfig cfg;
  cfg.e = 0.1;
  // Exact moments for alpha = 0: m1 = m3 = 1, m2 = E[1/lambda] = 1/(N-M).
  EigenExpectations zf_moments{1.0, 0.5, 1.0, 0};
  CHECK(asymptotic_capacity(BeamformerKind::mf_rzf, cfg, zf_moments) ==
        Catch::Approx(asymptotic_capacity(BeamformerKind::mf_zf, cfg, {})).epsilon(1e-14));
  // alpha -> infinity: m1 ~ E[lambda]/alpha = N/alpha, m2 ~ N/alpha^2,
  // m3 ~ E[lambda^2]/alpha^2 = (N^2 + MN)/alpha^2.
  const double a = 1e8;
  EigenExpectations big{6.0 / a, 6.0 / (a * a), 60.0 / (a * a), 0};
  CHECK(asymptotic_capacity(BeamformerKind::mf_rzf, cfg, big) ==
        Catch::Approx(asymptotic_capacity(BeamformerKind::mf, cfg, {})).epsilon(1e-6));
}

TEST_CASE("eigenvalue expectations", "[capacity][eigen]") {
  const auto pool = sample_wishart_eigenvalues(4, 6, 1000, 7);
  REQUIRE(pool.eigenvalues.size() == 4000);
  const auto e0 = expectations_at(pool, 0.0);
  CHECK(e0.m1 == 1.0);
  CHECK(e0.m3 == 1.0);
  CHECK(e0.samples == 1000);
  for (double alpha : {0.0, 0.1, 0.5, 2.0, 10.0}) {
    const auto ex = expectations_at(pool, alpha);
    CHECK(std::abs(ex.m3 - (ex.m1 - alpha * ex.m2)) < 1e-12);
    CHECK(ex.m1 >= 0.0);
    CHECK(ex.m1 <= 1.0);
  }
  double inv = 0.0;
  for (double l : pool.eigenvalues) inv += 1.0 / l;
  CHECK(e0.m2 == Catch::Approx(inv / 4000.0).epsilon(1e-12));
  CHECK_THROWS_AS(expectations_at(WishartEigenSample{}, 0.1), std::invalid_argument);
}

TEST_CASE("inverse Wishart trace mean", "[capacity][eigen]") {
  const auto pool = sample_wishart_eigenvalues(4, 6, 10000, 8);
  const auto e0 = expectations_at(pool, 0.0);
  CHECK(4.0 * e0.m2 == Catch::Approx(2.0).margin(0.1));  // E tr (GG^H)^{-1} = M/(N-M)
}

TEST_CASE("optimal alpha", "[capacity][alpha]") {
  auto cfg = fig_config(20, 0.1);
  CHECK(optimal_alpha(cfg) == Catch::Approx(1.52).epsilon(1e-14));
  cfg.e = 0.0;
  cfg.k = 100000;
  CHECK(optimal_alpha(cfg) < 1e-3);
  cfg.k = 0;
  CHECK_THROWS_AS(optimal_alpha(cfg), std::invalid_argument);
  CHECK(conventional_alpha(fig_config(20, 0.0)) == Catch::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("optimal alpha maximizes the MF-RZF closed form", "[capacity][alpha]") {
  NetworkConfig cfg;
  cfg.m = 2;
  cfg.n = 4;
  cfg.k = 20;
  cfg.e = 0.1;
  const auto pool = sample_wishart_eigenvalues(2, 4, 10000, 3);
  for (double qnr : {0.0, 10.0, 20.0, 30.0}) {
    cfg.q = std::pow(10.0, qnr / 10.0);
    double best = -1.0, best_alpha = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      cfg.alpha = 0.01 * i;
      const double c = asymptotic_capacity(BeamformerKind::mf_rzf, cfg, expectations_at(pool, cfg.alpha));
      if (c > best) {
        best = c;
        best_alpha = cfg.alpha;
      }
    }
    CHECK(std::abs(best_alpha - optimal_alpha(cfg)) < 0.05);
  }
}

TEST_CASE("dynamic error", "[capacity]") {
  CHECK(dynamic_error(10, 0.05, 0.005) == Catch::Approx(0.1).epsilon(1e-15));
  CHECK(dynamic_error(3, 0.2, 0.0) == dynamic_error(300, 0.2, 0.0));
  CHECK_THROWS_AS(dynamic_error(3, -0.1, 0.0), std::invalid_argument);
}

TEST_CASE("average power control runs through the ergodic path", "[capacity]") {
  auto cfg = fig_config(10, 0.1);
  CapacityOptions opts;
  opts.power = PowerControl::average;
  const auto avg = simulate_capacities(kSchemes, cfg, 200, 3, opts);
  opts.power = PowerControl::taylor;
  const auto tay = simulate_capacities(kSchemes, cfg, 200, 3, opts);
  const auto ex = simulate_capacities(kSchemes, cfg, 200, 3);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(avg.schemes[s].mean > 0.0);
    CHECK(std::abs(tay.schemes[s].mean - ex.schemes[s].mean) < 0.05 * ex.schemes[s].mean);
  }
}

TEST_CASE("near-singular MF-ZF draws are flagged, not fatal", "[capacity][singular]") {
  // Rank-deficient Ghat: MF-ZF cannot invert it, MF does not need to.
  NetworkConfig cfg;
  cfg.m = cfg.n = 2;
  cfg.k = 1;
  ChannelRealization real;
  real.h = {ComplexMatrix::identity(2)};
  real.g = {ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}}};
  real.omega = {ComplexMatrix(2, 2)};
  real.ghat = real.g;
  CHECK_THROWS_AS(trial_rate({BeamformerKind::mf_zf, 0.0}, cfg, real, PowerControl::exact, nullptr), SingularMatrixError);
  CHECK(trial_rate({BeamformerKind::mf, 0.0}, cfg, real, PowerControl::exact, nullptr) >= 0.0);
}
