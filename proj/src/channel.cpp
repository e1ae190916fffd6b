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

#include "relaycap/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace relaycap {

namespace {

std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream, std::uint32_t lane) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), lane};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id, Lane lane)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(make_engine(master_seed, stream_id, static_cast<std::uint32_t>(lane))) {}

cplx RngStream::complex_normal(double variance) {
  const double sd = std::sqrt(0.5 * variance);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {sd * re, sd * im};
}

ComplexMatrix sample_cn01(RngStream& rng, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("sample_cn01: empty shape");
  ComplexMatrix out(rows, cols);
  for (auto& v : out.entries()) v = rng.complex_normal();
  return out;
}

CorruptedCsi corrupt_csi(const ComplexMatrix& g, double e, RngStream& rng) {
  if (!(e >= 0.0)) throw std::invalid_argument("corrupt_csi: e must be nonnegative");
  ComplexMatrix omega = sample_cn01(rng, g.rows(), g.cols());
  ComplexMatrix ghat = g + omega * e;
  return {std::move(ghat), std::move(omega)};
}

ChannelRealization ChannelRealization::with_error(double new_e) const {
  if (!(new_e >= 0.0)) throw std::invalid_argument("with_error: e must be nonnegative");
  ChannelRealization out{h, g, omega, {}, new_e};
  out.ghat.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out.ghat.push_back(g[k] + omega[k] * new_e);
  return out;
}

ChannelRealization draw_realization(std::size_t m, std::size_t n, std::size_t k, double e, RngStream& rng) {
  if (!(e >= 0.0)) throw std::invalid_argument("draw_realization: e must be nonnegative");
  ChannelRealization out;
  out.e = e;
  out.h.reserve(k);
  out.g.reserve(k);
  out.omega.reserve(k);
  out.ghat.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.h.push_back(sample_cn01(rng, n, m));
  for (std::size_t i = 0; i < k; ++i) out.g.push_back(sample_cn01(rng, m, n));
  for (std::size_t i = 0; i < k; ++i) {
    auto csi = corrupt_csi(out.g[i], e, rng);
    out.omega.push_back(std::move(csi.omega));
    out.ghat.push_back(std::move(csi.ghat));
  }
  return out;
}

LemmaDeviations verify_lemmas(RngStream& rng, std::size_t trials, const ComplexMatrix& a,
                              const ComplexMatrix& b) {
  if (trials == 0) throw std::invalid_argument("verify_lemmas: trials must be >= 1");
  if (b.rows() != a.cols() || b.cols() != a.rows())
    throw std::invalid_argument("verify_lemmas: B must be N x M for M x N A");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const ComplexMatrix c = b * a;  // N x N

  ComplexMatrix acc1(m, n);
  cplx acc2{};
  ComplexMatrix acc3(m, m);
  for (std::size_t t = 0; t < trials; ++t) {
    const ComplexMatrix omega = sample_cn01(rng, m, n);
    // tr(A Omega^H) = sum_ij A_ij conj(Omega_ij); tr(B Omega) = sum_ij B_ji Omega_ij
    cplx t_a{};
    cplx t_b{};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        t_a += a(i, j) * std::conj(omega(i, j));
        t_b += b(j, i) * omega(i, j);
      }
    acc1 += omega * t_a;
    acc2 += t_a * t_b;
    acc3 += multiply_adjoint(omega * c, omega);
  }
  const double inv_t = 1.0 / static_cast<double>(trials);
  acc1 *= inv_t;
  acc2 *= inv_t;
  acc3 *= inv_t;

  const ComplexMatrix target3 = ComplexMatrix::identity(m) * trace(c);
  return {frobenius_norm(acc1 - a), std::abs(acc2 - trace_of_product(a, b)), frobenius_norm(acc3 - target3)};
}

}  // namespace relaycap
