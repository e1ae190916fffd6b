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

#include "relaycap/capacity.hpp"

#include <omp.h>

#include <cmath>
#include <memory>
#include <optional>

namespace relaycap {

namespace {

constexpr double kZ95 = 1.959963984540054;

double dim(std::size_t v) { return static_cast<double>(v); }

std::vector<double> wishart_eigenvalues_of_draw(std::size_t m, std::size_t n, std::uint64_t seed,
                                                std::size_t index) {
  RngStream rng(seed, index, RngStream::Lane::eigen);
  const ComplexMatrix g = sample_cn01(rng, m, n);
  return hermitian_eigenvalues(multiply_adjoint(g, g));
}

double cutset_rate(const NetworkConfig& cfg, const ChannelRealization& real) {
  ComplexMatrix acc = ComplexMatrix::identity(cfg.m);
  const double snr = cfg.p / (dim(cfg.m) * cfg.sigma1_sq);
  for (const auto& h : real.h) acc += adjoint_multiply(h, h) * snr;
  return 0.5 * hermitian_pd_logdet(acc) / std::log(2.0);
}

// Rates of every scheme (and the cut-set bound, last slot) for trial t.
// Degenerate draws contribute zero bits and set the flag.
void evaluate_trial(std::span<const SchemeSetting> schemes, const NetworkConfig& cfg, std::uint64_t seed,
                    std::size_t t, const CapacityOptions& opts, double* rates, unsigned char* flags) {
  RngStream rng(seed, t);
  const ChannelRealization real = draw_realization(cfg.m, cfg.n, cfg.k, cfg.e, rng);
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    try {
      rates[s] = trial_rate(schemes[s], cfg, real, opts.power, opts.eigen_pool);
      flags[s] = 0;
    } catch (const SingularMatrixError&) {
      rates[s] = 0.0;
      flags[s] = 1;
    } catch (const DegenerateBeamformerError&) {
      rates[s] = 0.0;
      flags[s] = 1;
    }
  }
  rates[schemes.size()] = cutset_rate(cfg, real);
  flags[schemes.size()] = 0;
}

CapacityBatch reduce_batch(std::size_t n_schemes, std::size_t trials, const std::vector<double>& rates,
                           const std::vector<unsigned char>& flags) {
  const std::size_t width = n_schemes + 1;
  CapacityBatch out;
  std::vector<double> column(trials);
  for (std::size_t s = 0; s < width; ++s) {
    std::size_t flagged = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      column[t] = rates[t * width + s];
      flagged += flags[t * width + s];
    }
    auto est = summarize_trials(column, flagged);
    if (s < n_schemes)
      out.schemes.push_back(est);
    else
      out.cutset = est;
  }
  return out;
}

// Keeps a sampled pool alive when the caller did not provide one.
struct EigenPoolHolder {
  std::optional<WishartEigenSample> owned;
  const WishartEigenSample* pool = nullptr;
};

EigenPoolHolder ensure_pool(std::span<const SchemeSetting> schemes, const NetworkConfig& cfg,
                            const CapacityOptions& opts, std::uint64_t seed) {
  EigenPoolHolder h;
  h.pool = opts.eigen_pool;
  if (h.pool || opts.power != PowerControl::average) return h;
  for (const auto& s : schemes) {
    if (s.kind == BeamformerKind::mf_rzf) {
      h.owned = sample_wishart_eigenvalues(cfg.m, cfg.n, kDefaultEigenSamples, seed, opts.workers);
      h.pool = &*h.owned;
      break;
    }
  }
  return h;
}

CapacityBatch empty_network_batch(std::size_t n_schemes, std::size_t trials) {
  CapacityBatch out;
  out.schemes.assign(n_schemes, CapacityEstimate{0.0, 0.0, trials, 0});
  out.cutset = CapacityEstimate{0.0, 0.0, trials, 0};
  return out;
}

}  // namespace

CapacityEstimate summarize_trials(std::span<const double> values, std::size_t flagged) {
  CapacityEstimate est;
  est.trials = values.size();
  est.flagged_trials = flagged;
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / dim(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / dim(values.size() - 1);
    est.half_width = kZ95 * std::sqrt(var / dim(values.size()));
  }
  return est;
}

WishartEigenSample sample_wishart_eigenvalues(std::size_t m, std::size_t n, std::size_t matrices,
                                              std::uint64_t seed, int workers) {
  WishartEigenSample out{m, n, matrices, std::vector<double>(m * matrices)};
  const auto count = static_cast<long long>(matrices);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto vals = wishart_eigenvalues_of_draw(m, n, seed, idx);
    std::copy(vals.begin(), vals.end(), out.eigenvalues.begin() + static_cast<std::ptrdiff_t>(idx * m));
  }
  return out;
}

WishartEigenSample sample_wishart_eigenvalues_serial(std::size_t m, std::size_t n, std::size_t matrices,
                                                     std::uint64_t seed) {
  WishartEigenSample out{m, n, matrices, {}};
  out.eigenvalues.reserve(m * matrices);
  for (std::size_t i = 0; i < matrices; ++i) {
    const auto vals = wishart_eigenvalues_of_draw(m, n, seed, i);
    out.eigenvalues.insert(out.eigenvalues.end(), vals.begin(), vals.end());
  }
  return out;
}

EigenExpectations expectations_at(const WishartEigenSample& sample, double alpha) {
  if (sample.eigenvalues.empty()) throw std::invalid_argument("expectations_at: empty eigenvalue pool");
  if (!(alpha >= 0.0)) throw std::invalid_argument("expectations_at: alpha must be nonnegative");
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (double lam : sample.eigenvalues) {
    const double d = lam + alpha;
    s1 += lam / d;
    s2 += lam / (d * d);
    s3 += (lam * lam) / (d * d);
  }
  const double inv = 1.0 / dim(sample.eigenvalues.size());
  return {s1 * inv, s2 * inv, s3 * inv, sample.matrices};
}

EigenExpectations eigen_expectations(const NetworkConfig& cfg, std::size_t samples, std::uint64_t seed) {
  return expectations_at(sample_wishart_eigenvalues(cfg.m, cfg.n, samples, seed), cfg.alpha);
}

std::vector<double> relay_power_factors(const SchemeSetting& scheme, const NetworkConfig& cfg,
                                        const ChannelRealization& real, PowerControl power,
                                        const WishartEigenSample* eigen_pool) {
  NetworkConfig local = cfg;
  local.alpha = scheme.alpha;
  local.e = real.e;
  switch (power) {
    case PowerControl::exact:
      return exact_power_factors(scheme.kind, real, local);
    case PowerControl::taylor: {
      std::vector<double> rho(real.relays());
      for (std::size_t k = 0; k < real.relays(); ++k)
        rho[k] = taylor_power_factor(scheme.kind, real.h[k], real.g[k], real.omega[k], local).rho_taylor;
      return rho;
    }
    case PowerControl::average: {
      EigenExpectations eig;
      if (scheme.kind == BeamformerKind::mf_rzf) {
        if (!eigen_pool) throw std::invalid_argument("average MF-RZF factor needs an eigenvalue pool");
        eig = expectations_at(*eigen_pool, scheme.alpha);
      }
      return std::vector<double>(real.relays(), average_power_factor(scheme.kind, local, eig));
    }
  }
  return {};
}

double trial_rate(const SchemeSetting& scheme, const NetworkConfig& cfg, const ChannelRealization& real,
                  PowerControl power, const WishartEigenSample* eigen_pool) {
  NetworkConfig local = cfg;
  local.alpha = scheme.alpha;
  local.kind = scheme.kind;
  const auto rho = relay_power_factors(scheme, local, real, power, eigen_pool);
  return post_snr(scheme.kind, real, rho, local).half_duplex_rate();
}

CapacityBatch simulate_capacities(std::span<const SchemeSetting> schemes, const NetworkConfig& cfg,
                                  std::size_t trials, std::uint64_t seed, const CapacityOptions& opts) {
  if (cfg.k == 0) return empty_network_batch(schemes.size(), trials);
  cfg.validate();
  const auto holder = ensure_pool(schemes, cfg, opts, seed);
  CapacityOptions local = opts;
  local.eigen_pool = holder.pool;

  const std::size_t width = schemes.size() + 1;
  std::vector<double> rates(trials * width);
  std::vector<unsigned char> flags(trials * width);
  const auto count = static_cast<long long>(trials);
  const int threads = opts.workers > 0 ? opts.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (long long t = 0; t < count; ++t) {
    const auto idx = static_cast<std::size_t>(t);
    evaluate_trial(schemes, cfg, seed, idx, local, rates.data() + idx * width, flags.data() + idx * width);
  }
  return reduce_batch(schemes.size(), trials, rates, flags);
}

CapacityBatch simulate_capacities_serial(std::span<const SchemeSetting> schemes, const NetworkConfig& cfg,
                                         std::size_t trials, std::uint64_t seed, const CapacityOptions& opts) {
  if (cfg.k == 0) return empty_network_batch(schemes.size(), trials);
  cfg.validate();
  const auto holder = ensure_pool(schemes, cfg, opts, seed);
  CapacityOptions local = opts;
  local.eigen_pool = holder.pool;

  const std::size_t width = schemes.size() + 1;
  std::vector<double> rates(trials * width);
  std::vector<unsigned char> flags(trials * width);
  for (std::size_t t = 0; t < trials; ++t)
    evaluate_trial(schemes, cfg, seed, t, local, rates.data() + t * width, flags.data() + t * width);
  return reduce_batch(schemes.size(), trials, rates, flags);
}

CapacityEstimate ergodic_capacity(BeamformerKind kind, const NetworkConfig& cfg, std::size_t trials,
                                  std::uint64_t seed, const CapacityOptions& opts) {
  const SchemeSetting scheme{kind, cfg.alpha};
  return simulate_capacities(std::span(&scheme, 1), cfg, trials, seed, opts).schemes.front();
}

CapacityEstimate cutset_upper_bound(const NetworkConfig& cfg, std::size_t trials, std::uint64_t seed,
                                    int workers) {
  CapacityOptions opts;
  opts.workers = workers;
  return simulate_capacities({}, cfg, trials, seed, opts).cutset;
}

double average_power_factor(BeamformerKind kind, const NetworkConfig& cfg, const EigenExpectations& eig) {
  const double m = dim(cfg.m), n = dim(cfg.n);
  const double load = cfg.p * (m + n) + m;
  switch (kind) {
    case BeamformerKind::mf:
      return std::sqrt(cfg.q / (load * n * n));
    case BeamformerKind::mf_zf:
      if (cfg.n <= cfg.m) throw DomainError("average MF-ZF factor requires N > M (E[tr (GG^H)^{-1}] diverges)");
      // E[tr(B (GG^H)^{-1})] = N (P(M+N) + M) / (N - M); the factor N is
      // what the large-K MF-ZF capacity expression needs as well.
      return std::sqrt(cfg.q * (n - m) / (n * load));
    case BeamformerKind::mf_rzf:
      if (!(eig.m2 > 0.0)) throw std::invalid_argument("average MF-RZF factor needs E[lambda/(lambda+alpha)^2] > 0");
      return std::sqrt(cfg.q / ((cfg.p * (m + n) * n + m * n) * eig.m2));
  }
  return 0.0;
}

double asymptotic_capacity(BeamformerKind kind, const NetworkConfig& cfg, const EigenExpectations& eig) {
  const double m = dim(cfg.m), n = dim(cfg.n), k = dim(cfg.k);
  const double p = cfg.p, q = cfg.q, s1 = cfg.sigma1_sq, s2 = cfg.sigma2_sq;
  const double e2 = cfg.e * cfg.e;
  const double dest_load = p * m * (m + n) + m * m;  // P M (M+N) + M^2
  double sinr = 0.0;
  switch (kind) {
    case BeamformerKind::mf: {
      const double den = (e2 * p + s1) * k * m * (m + n) / n + dest_load * s2 / (q * n);
      sinr = p * k * k * n / den;
      break;
    }
    case BeamformerKind::mf_zf: {
      if (cfg.n <= cfg.m) throw DomainError("MF-ZF asymptotic capacity requires N > M");
      const double den = e2 * p * k * m * (m + n) / (n - m) + k * m * s1 + dest_load * s2 / (q * (n - m));
      sinr = p * k * k * n / den;
      break;
    }
    case BeamformerKind::mf_rzf: {
      const double den = e2 * p * k * m * (m + n) * eig.m2 + k * m * eig.m3 * s1 + dest_load / q * eig.m2 * s2;
      sinr = p * k * k * n * eig.m1 * eig.m1 / den;
      break;
    }
  }
  return 0.5 * m * std::log2(1.0 + sinr);
}

double optimal_alpha(const NetworkConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("optimal_alpha: K must be >= 1");
  const double m = dim(cfg.m), n = dim(cfg.n), k = dim(cfg.k);
  const double num = (cfg.p * (m + n) + m) / cfg.q * cfg.sigma2_sq + cfg.e * cfg.e * cfg.p * k * (m + n);
  return num / (k * cfg.sigma1_sq);
}

double conventional_alpha(const NetworkConfig& cfg) { return dim(cfg.m) * cfg.sigma2_sq / cfg.q; }

double dynamic_error(std::size_t k, double sigma_q, double sigma_d) {
  if (!(sigma_q >= 0.0) || !(sigma_d >= 0.0)) throw std::invalid_argument("dynamic_error: sigmas must be >= 0");
  return sigma_q + dim(k) * sigma_d;
}

}  // namespace relaycap
