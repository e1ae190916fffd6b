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
#include <span>
#include <stdexcept>
#include <vector>

#include "relaycap/beamforming.hpp"
#include "relaycap/channel.hpp"
#include "relaycap/receiver.hpp"

namespace relaycap {

/// A closed form was asked for outside its domain (e.g. MF-ZF with N == M).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct CapacityEstimate {
  double mean = 0.0;        ///< bits per channel use, half-duplex factor included
  double half_width = 0.0;  ///< 95% normal-approximation confidence half-width
  std::size_t trials = 0;
  std::size_t flagged_trials = 0;  ///< trials that hit a singular Gram matrix
};

/// Empirical eigenvalue moments of G G^H, G an M x N CN(0,1) matrix.
struct EigenExpectations {
  double m1 = 1.0;  ///< E[lambda / (lambda + alpha)]
  double m2 = 0.0;  ///< E[lambda / (lambda + alpha)^2]
  double m3 = 1.0;  ///< E[lambda^2 / (lambda + alpha)^2]
  std::size_t samples = 0;
};

/// Pooled eigenvalues of `matrices` independent Wishart draws. Draw i
/// uses RngStream(seed, i, Lane::eigen), so the pool does not depend on
/// the worker count.
struct WishartEigenSample {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t matrices = 0;
  std::vector<double> eigenvalues;
};

WishartEigenSample sample_wishart_eigenvalues(std::size_t m, std::size_t n, std::size_t matrices,
                                              std::uint64_t seed, int workers = 0);
WishartEigenSample sample_wishart_eigenvalues_serial(std::size_t m, std::size_t n, std::size_t matrices,
                                                     std::uint64_t seed);

EigenExpectations expectations_at(const WishartEigenSample& sample, double alpha);

/// sample_wishart_eigenvalues(cfg.m, cfg.n, samples, seed) evaluated at cfg.alpha.
EigenExpectations eigen_expectations(const NetworkConfig& cfg, std::size_t samples, std::uint64_t seed);

inline constexpr std::size_t kDefaultEigenSamples = 10000;

enum class PowerControl {
  exact,    ///< per-relay exact factor from Ghat (dynamic power control)
  taylor,   ///< first-order expansion around e = 0
  average,  ///< fixed factor averaged over the channel distribution
};

struct SchemeSetting {
  BeamformerKind kind = BeamformerKind::mf;
  double alpha = 0.0;  ///< only read for MF-RZF
};

struct CapacityOptions {
  PowerControl power = PowerControl::exact;
  int workers = 0;  ///< 0 = OpenMP default
  /// Eigenvalue pool for the average MF-RZF factor; sampled on demand if null.
  const WishartEigenSample* eigen_pool = nullptr;
};

struct CapacityBatch {
  std::vector<CapacityEstimate> schemes;  ///< one per requested scheme, same order
  CapacityEstimate cutset;
};

/// Ergodic capacity of several schemes plus the cut-set bound on common
/// channel draws. Trial t uses RngStream(seed, t). Per-trial rates are
/// reduced in trial order, so the result is bit-identical for any number
/// of workers.
CapacityBatch simulate_capacities(std::span<const SchemeSetting> schemes, const NetworkConfig& cfg,
                                  std::size_t trials, std::uint64_t seed, const CapacityOptions& opts = {});

/// Single-threaded reference for simulate_capacities.
CapacityBatch simulate_capacities_serial(std::span<const SchemeSetting> schemes, const NetworkConfig& cfg,
                                         std::size_t trials, std::uint64_t seed,
                                         const CapacityOptions& opts = {});

/// Ergodic capacity of cfg.kind (alpha = cfg.alpha). K = 0 gives 0 bits.
CapacityEstimate ergodic_capacity(BeamformerKind kind, const NetworkConfig& cfg, std::size_t trials,
                                  std::uint64_t seed, const CapacityOptions& opts = {});

/// E{(1/2) log2 det(I_M + P/(M sigma1^2) sum_k H_k^H H_k)}.
CapacityEstimate cutset_upper_bound(const NetworkConfig& cfg, std::size_t trials, std::uint64_t seed,
                                    int workers = 0);

/// Half-duplex rate of one realization under the given power control.
/// Throws SingularMatrixError / DegenerateBeamformerError on degenerate draws.
double trial_rate(const SchemeSetting& scheme, const NetworkConfig& cfg, const ChannelRealization& real,
                  PowerControl power, const WishartEigenSample* eigen_pool);

/// Per-relay factors for one realization.
std::vector<double> relay_power_factors(const SchemeSetting& scheme, const NetworkConfig& cfg,
                                        const ChannelRealization& real, PowerControl power,
                                        const WishartEigenSample* eigen_pool);

/// Fixed power factor averaged over the channel distribution:
///   MF      (Q / ((P(M+N) + M) N^2))^{1/2}
///   MF-ZF   (Q (N-M) / (N (P(M+N) + M)))^{1/2}        (N > M only)
///   MF-RZF  (Q / ((P(M+N)N + MN) E[lambda/(lambda+alpha)^2]))^{1/2}
/// Each is (Q / E[tr F (P/M HH^H + I) F^H])^{1/2}; they take sigma1^2 = 1.
double average_power_factor(BeamformerKind kind, const NetworkConfig& cfg, const EigenExpectations& eig);

/// Large-K closed forms. `eig` is read for MF-RZF only.
double asymptotic_capacity(BeamformerKind kind, const NetworkConfig& cfg, const EigenExpectations& eig);

/// alpha maximizing the MF-RZF asymptotic capacity:
///   ((P(M+N) + M) sigma2^2 / Q + e^2 P K (M+N)) / (K sigma1^2)
double optimal_alpha(const NetworkConfig& cfg);

/// Regularizer of the conventional RZF tuned for perfect CSI: M sigma2^2 / Q.
double conventional_alpha(const NetworkConfig& cfg);

/// CSI error that grows with the relay count: sigma_q + K sigma_d.
double dynamic_error(std::size_t k, double sigma_q, double sigma_d);

/// Mean and 95% half-width of a vector of per-trial values.
CapacityEstimate summarize_trials(std::span<const double> values, std::size_t flagged);

}  // namespace relaycap
