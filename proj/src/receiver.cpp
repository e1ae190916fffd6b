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

#include "relaycap/receiver.hpp"

#include <cmath>
#include <stdexcept>

namespace relaycap {

namespace {

ComplexMatrix regularized_inverse(const ComplexMatrix& g, double alpha) {
  ComplexMatrix gram = multiply_adjoint(g, g);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += alpha;
  return hermitian_pd_inverse(gram);
}

// I - alpha (G G^H + alpha I)^{-1}; equals I at alpha = 0 without inverting.
ComplexMatrix rzf_shrinkage(const ComplexMatrix& g, double alpha, ComplexMatrix* g_alpha) {
  const std::size_t m = g.rows();
  if (alpha == 0.0) {
    if (g_alpha) *g_alpha = regularized_inverse(g, 0.0);
    return ComplexMatrix::identity(m);
  }
  ComplexMatrix ga = regularized_inverse(g, alpha);
  ComplexMatrix t = ComplexMatrix::identity(m) - ga * alpha;
  if (g_alpha) *g_alpha = std::move(ga);
  return t;
}

void check_realization(const ChannelRealization& real, std::span<const double> rho) {
  if (real.relays() == 0) throw std::invalid_argument("realization has no relays");
  if (rho.size() != real.relays()) throw std::invalid_argument("one power factor per relay required");
  for (double r : rho)
    if (!(r > 0.0)) throw std::invalid_argument("power factors must be positive");
}

}  // namespace

double StreamSnrReport::half_duplex_rate() const {
  double bits = 0.0;
  for (double g : gamma) bits += std::log2(1.0 + g);
  return 0.5 * bits;
}

EffectiveChannel effective_channel(BeamformerKind kind, const ChannelRealization& real,
                                   std::span<const double> rho, double alpha) {
  check_realization(real, rho);
  const std::size_t m = real.h.front().cols();
  ComplexMatrix h_sd(m, m);
  for (std::size_t k = 0; k < real.relays(); ++k) {
    const ComplexMatrix hh = adjoint_multiply(real.h[k], real.h[k]);
    switch (kind) {
      case BeamformerKind::mf:
        h_sd += (multiply_adjoint(real.g[k], real.g[k]) * hh) * rho[k];
        break;
      case BeamformerKind::mf_zf:
        h_sd += hh * rho[k];
        break;
      case BeamformerKind::mf_rzf:
        h_sd += (rzf_shrinkage(real.g[k], alpha, nullptr) * hh) * rho[k];
        break;
    }
  }
  auto [q, r] = qr_decompose(h_sd);
  return {std::move(h_sd), std::move(q), std::move(r), kind};
}

StreamSnrReport post_snr(BeamformerKind kind, const ChannelRealization& real, std::span<const double> rho,
                         const NetworkConfig& cfg) {
  const EffectiveChannel eff = effective_channel(kind, real, rho, cfg.alpha);
  const std::size_t m = eff.r_sd.rows();
  const double per_stream = cfg.p / static_cast<double>(m);
  const double e_sq = real.e * real.e;
  const ComplexMatrix qh = eff.q_sd.adjoint();

  StreamSnrReport rep;
  rep.gamma.assign(m, 0.0);
  rep.signal_power.assign(m, 0.0);
  rep.ceg_noise.assign(m, 0.0);
  rep.relay_noise.assign(m, 0.0);
  rep.dest_noise.assign(m, cfg.sigma2_sq);

  for (std::size_t k = 0; k < real.relays(); ++k) {
    const ComplexMatrix& h = real.h[k];
    const ComplexMatrix& g = real.g[k];
    const ComplexMatrix hh = adjoint_multiply(h, h);
    const ComplexMatrix hh2 = hh * hh;
    const double rho_sq = rho[k] * rho[k];
    const double ceg_scale = e_sq * per_stream * rho_sq;
    const double relay_scale = cfg.sigma1_sq * rho_sq;

    switch (kind) {
      case BeamformerKind::mf: {
        const ComplexMatrix qg = qh * g;  // M x N
        const double tr_hh2 = trace(hh2).real();
        const ComplexMatrix relay = multiply_adjoint(qg, h * g);  // Q^H G G^H H^H
        for (std::size_t s = 0; s < m; ++s) {
          rep.ceg_noise[s] += ceg_scale * tr_hh2 * row_norm_sq(qg, s);
          rep.relay_noise[s] += relay_scale * row_norm_sq(relay, s);
        }
        break;
      }
      case BeamformerKind::mf_zf: {
        const double ceg = e_sq > 0.0 ? trace_of_product(hh2, regularized_inverse(g, 0.0)).real() : 0.0;
        const ComplexMatrix relay = multiply_adjoint(qh, h);  // Q^H H^H
        for (std::size_t s = 0; s < m; ++s) {
          rep.ceg_noise[s] += ceg_scale * ceg;
          rep.relay_noise[s] += relay_scale * row_norm_sq(relay, s);
        }
        break;
      }
      case BeamformerKind::mf_rzf: {
        ComplexMatrix ga;
        const ComplexMatrix t = rzf_shrinkage(g, cfg.alpha, e_sq > 0.0 ? &ga : nullptr);
        const double ceg = e_sq > 0.0 ? trace_of_product(hh2, ga * t).real() : 0.0;
        const ComplexMatrix relay = multiply_adjoint(qh * t, h);  // Q^H (I - alpha G^alpha) H^H
        for (std::size_t s = 0; s < m; ++s) {
          rep.ceg_noise[s] += ceg_scale * ceg;
          rep.relay_noise[s] += relay_scale * row_norm_sq(relay, s);
        }
        break;
      }
    }
  }
  for (std::size_t s = 0; s < m; ++s) {
    const double r = eff.r_sd(s, s).real();
    rep.signal_power[s] = per_stream * r * r;
    rep.gamma[s] = rep.signal_power[s] / (rep.ceg_noise[s] + rep.relay_noise[s] + rep.dest_noise[s]);
  }
  return rep;
}

std::vector<double> exact_power_factors(BeamformerKind kind, const ChannelRealization& real,
                                        const NetworkConfig& cfg) {
  std::vector<double> rho(real.relays());
  for (std::size_t k = 0; k < real.relays(); ++k)
    rho[k] = exact_power_factor(build_beamformer(kind, real.h[k], real.ghat[k], cfg.alpha), real.h[k], cfg);
  return rho;
}

StreamSnrReport exact_snr_oracle(BeamformerKind kind, const ChannelRealization& real, const NetworkConfig& cfg,
                                 std::size_t symbol_trials, RngStream& rng) {
  if (symbol_trials == 0) throw std::invalid_argument("exact_snr_oracle: symbol_trials must be positive");
  const std::size_t kr = real.relays();
  const std::size_t m = real.h.front().cols();
  const std::size_t n = real.h.front().rows();

  std::vector<ComplexMatrix> f(kr);
  std::vector<double> rho_hat(kr);
  for (std::size_t k = 0; k < kr; ++k) {
    f[k] = build_beamformer(kind, real.h[k], real.ghat[k], cfg.alpha);
    rho_hat[k] = exact_power_factor(f[k], real.h[k], cfg);
  }
  const EffectiveChannel eff = effective_channel(kind, real, rho_hat, cfg.alpha);
  const ComplexMatrix qh = eff.q_sd.adjoint();

  // z = Q^H y = A s + sum_k B_k n_k + Q^H n_d
  ComplexMatrix h_true(m, m);
  std::vector<ComplexMatrix> relay_maps(kr);
  for (std::size_t k = 0; k < kr; ++k) {
    const ComplexMatrix gf = (real.g[k] * f[k]) * rho_hat[k];  // M x N
    h_true += gf * real.h[k];
    relay_maps[k] = qh * gf;
  }
  // Symbol part of the residual: (Q^H H_true - R) s.
  const ComplexMatrix mismatch = qh * h_true - eff.r_sd;

  const double per_stream = cfg.p / static_cast<double>(m);
  std::vector<double> sym_pow(m, 0.0), relay_pow(m, 0.0), dest_pow(m, 0.0);
  std::vector<cplx> s(m), nd(m), relay_sum(m);
  std::vector<cplx> nk(n);
  for (std::size_t t = 0; t < symbol_trials; ++t) {
    for (auto& v : s) v = rng.complex_normal(per_stream);
    std::fill(relay_sum.begin(), relay_sum.end(), cplx{});
    for (std::size_t k = 0; k < kr; ++k) {
      for (auto& v : nk) v = rng.complex_normal(cfg.sigma1_sq);
      const auto& b = relay_maps[k];
      for (std::size_t i = 0; i < m; ++i) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) acc += b(i, j) * nk[j];
        relay_sum[i] += acc;
      }
    }
    for (auto& v : nd) v = rng.complex_normal(cfg.sigma2_sq);
    const auto sym = mismatch * std::span<const cplx>(s);
    const auto dest = qh * std::span<const cplx>(nd);
    for (std::size_t i = 0; i < m; ++i) {
      sym_pow[i] += std::norm(sym[i]);
      relay_pow[i] += std::norm(relay_sum[i]);
      dest_pow[i] += std::norm(dest[i]);
    }
  }

  const double inv_t = 1.0 / static_cast<double>(symbol_trials);
  StreamSnrReport rep;
  rep.gamma.resize(m);
  rep.signal_power.resize(m);
  rep.ceg_noise.resize(m);
  rep.relay_noise.resize(m);
  rep.dest_noise.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = eff.r_sd(i, i).real();
    rep.signal_power[i] = per_stream * r * r;
    rep.ceg_noise[i] = sym_pow[i] * inv_t;
    rep.relay_noise[i] = relay_pow[i] * inv_t;
    rep.dest_noise[i] = dest_pow[i] * inv_t;
    rep.gamma[i] = rep.signal_power[i] / (rep.ceg_noise[i] + rep.relay_noise[i] + rep.dest_noise[i]);
  }
  return rep;
}

std::vector<cplx> qrd_detect(const EffectiveChannel& eff, std::span<const cplx> y) {
  if (y.size() != eff.q_sd.rows()) throw std::invalid_argument("qrd_detect: dimension mismatch");
  std::vector<cplx> out(eff.q_sd.cols());
  for (std::size_t i = 0; i < eff.q_sd.cols(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < y.size(); ++j) acc += std::conj(eff.q_sd(j, i)) * y[j];
    out[i] = acc;
  }
  return out;
}

std::vector<cplx> sic_detect(const EffectiveChannel& eff, std::span<const cplx> y) {
  return back_substitute(eff.r_sd, qrd_detect(eff, y));
}

}  // namespace relaycap
