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

#include <span>
#include <vector>

#include "relaycap/beamforming.hpp"
#include "relaycap/channel.hpp"
#include "relaycap/matrix.hpp"

namespace relaycap {

/// Source-to-destination channel seen by the QRD receiver, with its
/// factorization H_sd = Q_sd R_sd (diag(R_sd) real, nonnegative).
struct EffectiveChannel {
  ComplexMatrix h_sd;
  ComplexMatrix q_sd;
  ComplexMatrix r_sd;
  BeamformerKind kind = BeamformerKind::mf;
};

/// Per-stream post-processing SINR and its noise decomposition.
/// gamma[m] = signal_power[m] / (ceg_noise[m] + relay_noise[m] + dest_noise[m]).
struct StreamSnrReport {
  std::vector<double> gamma;
  std::vector<double> signal_power;  ///< (P/M) R_mm^2
  std::vector<double> ceg_noise;     ///< channel-error-generated term, proportional to e^2
  std::vector<double> relay_noise;   ///< amplified relay noise
  std::vector<double> dest_noise;    ///< destination noise (sigma2^2 in closed form)

  std::size_t streams() const noexcept { return gamma.size(); }
  /// (1/2) sum_m log2(1 + gamma_m), half-duplex bits per channel use.
  double half_duplex_rate() const;
};

/// Effective channel built from the true G with per-relay factors rho:
///   MF      sum_k rho_k G_k G_k^H H_k^H H_k
///   MF-ZF   sum_k rho_k H_k^H H_k
///   MF-RZF  sum_k rho_k (I - alpha G_k^alpha) H_k^H H_k,  G^alpha = (G G^H + alpha I)^{-1}
EffectiveChannel effective_channel(BeamformerKind kind, const ChannelRealization& real,
                                   std::span<const double> rho, double alpha);

/// Closed-form per-stream SINR of the first-order model. The CEG term uses
/// the true G, the realization's e, and the supplied factors rho.
StreamSnrReport post_snr(BeamformerKind kind, const ChannelRealization& real, std::span<const double> rho,
                         const NetworkConfig& cfg);

/// Exact relay factors rho_hat_k for beamformers built from Ghat.
std::vector<double> exact_power_factors(BeamformerKind kind, const ChannelRealization& real,
                                        const NetworkConfig& cfg);

/// Symbol-level simulation of the true received signal.
///
/// Relays use beamformers built from Ghat with exact factors rho_hat; the
/// destination's QRD comes from effective_channel(kind, real, rho_hat).
/// For each stream m the residual z_m - R_mm s_m - sum_{j>m} R_mj s_j is
/// split into its symbol, relay-noise and destination-noise parts, whose
/// empirical powers fill ceg_noise / relay_noise / dest_noise. The signal
/// power is the detector's (P/M) R_mm^2.
StreamSnrReport exact_snr_oracle(BeamformerKind kind, const ChannelRealization& real, const NetworkConfig& cfg,
                                 std::size_t symbol_trials, RngStream& rng);

/// Q_sd^H y.
std::vector<cplx> qrd_detect(const EffectiveChannel& eff, std::span<const cplx> y);

/// Successive interference cancellation: back substitution on Q_sd^H y.
std::vector<cplx> sic_detect(const EffectiveChannel& eff, std::span<const cplx> y);

}  // namespace relaycap
