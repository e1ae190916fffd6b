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

#include "relaycap/beamforming.hpp"

#include <cmath>

namespace relaycap {

std::string_view to_string(BeamformerKind kind) {
  switch (kind) {
    case BeamformerKind::mf: return "MF";
    case BeamformerKind::mf_zf: return "MF-ZF";
    case BeamformerKind::mf_rzf: return "MF-RZF";
  }
  return "?";
}

BeamformerKind parse_beamformer_kind(std::string_view name) {
  if (name == "MF") return BeamformerKind::mf;
  if (name == "MF-ZF") return BeamformerKind::mf_zf;
  if (name == "MF-RZF") return BeamformerKind::mf_rzf;
  throw std::invalid_argument("unknown beamformer: " + std::string(name));
}

void NetworkConfig::validate() const {
  if (m < 1) throw std::invalid_argument("M must be >= 1");
  if (n < m) throw std::invalid_argument("N >= M required: each relay must carry all M streams");
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("P and Q must be positive");
  if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0)) throw std::invalid_argument("noise powers must be positive");
  if (!(e >= 0.0)) throw std::invalid_argument("e must be nonnegative");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
}

namespace {

ComplexMatrix regularized_gram_inverse(const ComplexMatrix& g, double alpha) {
  ComplexMatrix gram = multiply_adjoint(g, g);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += alpha;
  return hermitian_pd_inverse(gram);
}

double real_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return trace_of_product(a, b).real();
}

}  // namespace

ComplexMatrix build_beamformer(BeamformerKind kind, const ComplexMatrix& h, const ComplexMatrix& ghat,
                               double alpha) {
  if (h.cols() != ghat.rows() || h.rows() != ghat.cols())
    throw std::invalid_argument("build_beamformer: H must be N x M and Ghat M x N");
  if (kind == BeamformerKind::mf) return multiply_adjoint(ghat.adjoint(), h);
  const double reg = kind == BeamformerKind::mf_zf ? 0.0 : alpha;
  if (!(reg >= 0.0)) throw std::invalid_argument("build_beamformer: alpha must be nonnegative");
  const ComplexMatrix precoder = adjoint_multiply(ghat, regularized_gram_inverse(ghat, reg));  // N x M
  return multiply_adjoint(precoder, h);
}

double relay_output_power(const ComplexMatrix& f, const ComplexMatrix& h, const NetworkConfig& cfg) {
  const double per_stream = cfg.p / static_cast<double>(cfg.m);
  return per_stream * frobenius_norm_sq(f * h) + cfg.sigma1_sq * frobenius_norm_sq(f);
}

double exact_power_factor(const ComplexMatrix& f, const ComplexMatrix& h, const NetworkConfig& cfg) {
  const double power = relay_output_power(f, h, cfg);
  if (!(power > 0.0) || !std::isfinite(power))
    throw DegenerateBeamformerError("exact_power_factor: beamformer has zero output power");
  return std::sqrt(cfg.q / power);
}

ComplexMatrix relay_power_kernel(const ComplexMatrix& h, const NetworkConfig& cfg) {
  const ComplexMatrix hh = adjoint_multiply(h, h);
  return (hh * hh) * (cfg.p / static_cast<double>(cfg.m)) + hh * cfg.sigma1_sq;
}

PowerFactorBreakdown taylor_power_factor(BeamformerKind kind, const ComplexMatrix& h, const ComplexMatrix& g,
                                         const ComplexMatrix& omega, const NetworkConfig& cfg) {
  const ComplexMatrix ghat = g + omega * cfg.e;
  PowerFactorBreakdown out;
  out.large_error = cfg.e > kTaylorErrorLimit;
  out.rho_exact = exact_power_factor(build_beamformer(kind, h, ghat, cfg.alpha), h, cfg);

  const ComplexMatrix b = relay_power_kernel(h, cfg);
  const ComplexMatrix g_err = multiply_adjoint(g, omega) + multiply_adjoint(omega, g);  // G Omega^H + Omega G^H
  double sign = 1.0;
  switch (kind) {
    case BeamformerKind::mf:
      out.u = real_trace_of_product(b, multiply_adjoint(g, g));
      out.v = real_trace_of_product(b, g_err);
      sign = -1.0;
      break;
    case BeamformerKind::mf_zf: {
      const ComplexMatrix winv = regularized_gram_inverse(g, 0.0);
      out.u = real_trace_of_product(b, winv);
      out.v = real_trace_of_product(b, winv * g_err * winv);
      break;
    }
    case BeamformerKind::mf_rzf: {
      const ComplexMatrix ga = regularized_gram_inverse(g, cfg.alpha);
      const ComplexMatrix gram = multiply_adjoint(g, g);
      out.u = real_trace_of_product(b, ga - (ga * ga) * cfg.alpha);
      const ComplexMatrix inner = g_err * ga * gram + gram * ga * g_err - g_err;
      out.v = real_trace_of_product(b, ga * inner * ga);
      break;
    }
  }
  if (!(out.u > 0.0)) throw DegenerateBeamformerError("taylor_power_factor: u is not positive");
  out.rho_zero = std::sqrt(cfg.q / out.u);
  out.rho_taylor = out.rho_zero * (1.0 + sign * cfg.e * out.v / (2.0 * out.u));
  return out;
}

}  // namespace relaycap
