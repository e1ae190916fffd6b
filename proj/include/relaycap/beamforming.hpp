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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "relaycap/matrix.hpp"

namespace relaycap {

enum class BeamformerKind { mf, mf_zf, mf_rzf };

std::string_view to_string(BeamformerKind kind);
BeamformerKind parse_beamformer_kind(std::string_view name);

/// Scalars of the dual-hop network. Powers are linear, not dB.
struct NetworkConfig {
  std::size_t m = 4;       ///< source / destination antennas
  std::size_t n = 6;       ///< antennas per relay
  std::size_t k = 20;      ///< number of relays
  double p = 10.0;         ///< total source power
  double q = 10.0;         ///< per-relay power budget
  double sigma1_sq = 1.0;  ///< relay noise power
  double sigma2_sq = 1.0;  ///< destination noise power
  double e = 0.0;          ///< CSI error gain; error power is e^2
  double alpha = 0.5;      ///< RZF regularizer shared by all relays
  BeamformerKind kind = BeamformerKind::mf;

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Beamformer whose relay output power is zero.
class DegenerateBeamformerError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Relay matrix F_k (N x N) built from perfect S-R CSI and relay-side R-D CSI:
///   MF      F = Ghat^H H^H
///   MF-ZF   F = Ghat^H (Ghat Ghat^H)^{-1} H^H
///   MF-RZF  F = Ghat^H (Ghat Ghat^H + alpha I)^{-1} H^H
/// MF-ZF is evaluated as MF-RZF with alpha = 0, so the two agree exactly.
ComplexMatrix build_beamformer(BeamformerKind kind, const ComplexMatrix& h, const ComplexMatrix& ghat,
                               double alpha);

/// tr{F ((P/M) H H^H + sigma1^2 I_N) F^H}
double relay_output_power(const ComplexMatrix& f, const ComplexMatrix& h, const NetworkConfig& cfg);

/// Scale that brings relay_output_power to exactly Q.
double exact_power_factor(const ComplexMatrix& f, const ComplexMatrix& h, const NetworkConfig& cfg);

struct PowerFactorBreakdown {
  double rho_exact = 0.0;   ///< exact factor with Ghat = G + e Omega
  double rho_zero = 0.0;    ///< (Q / u)^{1/2}, the error-free factor
  double u = 0.0;
  double v = 0.0;
  double rho_taylor = 0.0;  ///< rho_zero * (1 -/+ e v / (2u))
  bool large_error = false; ///< e > kTaylorErrorLimit: expansion not trustworthy
};

inline constexpr double kTaylorErrorLimit = 0.3;

/// First-order expansion of the power factor in the CSI error gain.
/// Sign is minus for MF and plus for MF-ZF / MF-RZF; both are what the
/// derivative of the respective trace gives.
PowerFactorBreakdown taylor_power_factor(BeamformerKind kind, const ComplexMatrix& h, const ComplexMatrix& g,
                                         const ComplexMatrix& omega, const NetworkConfig& cfg);

/// H^H ((P/M) H H^H + sigma1^2 I) H = (P/M)(H^H H)^2 + sigma1^2 H^H H, M x M.
ComplexMatrix relay_power_kernel(const ComplexMatrix& h, const NetworkConfig& cfg);

}  // namespace relaycap
