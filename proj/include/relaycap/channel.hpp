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
#include <random>
#include <vector>

#include "relaycap/matrix.hpp"

namespace relaycap {

/// Independent random stream keyed by (master seed, stream id, lane).
///
/// Two streams built from the same key produce the same draws no matter
/// which thread owns them or in which order they are created. Monte-Carlo
/// trial t uses stream id t; the lane separates unrelated consumers that
/// share a master seed (channel draws, symbol draws, eigenvalue sampling).
class RngStream {
public:
  enum class Lane : std::uint32_t { channel = 0, symbols = 1, eigen = 2, lemma = 3 };

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id, Lane lane = Lane::channel);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// One CN(0, variance) scalar: real and imaginary parts each N(0, variance/2).
  cplx complex_normal(double variance = 1.0);

private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// rows x cols matrix with i.i.d. CN(0,1) entries, drawn row by row.
ComplexMatrix sample_cn01(RngStream& rng, std::size_t rows, std::size_t cols);

struct CorruptedCsi {
  ComplexMatrix ghat;   ///< G + e * Omega
  ComplexMatrix omega;  ///< error direction, i.i.d. CN(0,1)
};

/// Imperfect relay-to-destination CSI. Omega is drawn even when e == 0 so
/// the number of draws does not depend on e.
CorruptedCsi corrupt_csi(const ComplexMatrix& g, double e, RngStream& rng);

/// One coherence block of the K-relay network.
struct ChannelRealization {
  std::vector<ComplexMatrix> h;      ///< source -> relay k, N x M
  std::vector<ComplexMatrix> g;      ///< relay k -> destination (true), M x N
  std::vector<ComplexMatrix> omega;  ///< CSI error directions, M x N
  std::vector<ComplexMatrix> ghat;   ///< relay-side CSI, G + e * Omega
  double e = 0.0;

  std::size_t relays() const noexcept { return h.size(); }

  /// Same H, G, Omega with the CSI rebuilt for another error gain.
  ChannelRealization with_error(double new_e) const;
};

/// Draw order within a stream is fixed: H_1..H_K, G_1..G_K, Omega_1..Omega_K.
ChannelRealization draw_realization(std::size_t m, std::size_t n, std::size_t k, double e, RngStream& rng);

struct LemmaDeviations {
  double first;   ///< || mean tr(A Omega^H) Omega - A ||_F
  double second;  ///< | mean tr(A Omega^H) tr(B Omega) - tr(AB) |
  double third;   ///< || mean Omega C Omega^H - tr(C) I_M ||_F, C = B A
};

/// Empirical check of the three Omega moment identities over `trials`
/// draws of an M x N Omega. A is M x N and B is N x M.
LemmaDeviations verify_lemmas(RngStream& rng, std::size_t trials, const ComplexMatrix& a,
                              const ComplexMatrix& b);

}  // namespace relaycap
