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

#include "relaycap/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace relaycap {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(data_.size() == rows * cols, "ComplexMatrix: entry count != rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix subtract: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(ComplexMatrix lhs, cplx s) { return lhs *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix rhs) { return rhs *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), "matrix multiply: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.cols(), "multiply_adjoint: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto arow = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto brow = b.row(j);
      cplx acc{};
      for (std::size_t k = 0; k < a.cols(); ++k) acc += arow[k] * std::conj(brow[k]);
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows(), "adjoint_multiply: inner dimension mismatch");
  ComplexMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto arow = a.row(k);
    auto brow = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const cplx aki = std::conj(arow[i]);
      if (aki == cplx{}) continue;
      auto orow = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aki * brow[j];
    }
  }
  return out;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x) {
  require(a.cols() == x.size(), "matrix-vector: dimension mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto arow = a.row(i);
    cplx acc{};
    for (std::size_t j = 0; j < x.size(); ++j) acc += arow[j] * x[j];
    y[i] = acc;
  }
  return y;
}

cplx trace(const ComplexMatrix& a) {
  require(a.is_square(), "trace: matrix not square");
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows() && a.rows() == b.cols(), "trace_of_product: shape mismatch");
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
  return t;
}

double frobenius_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.entries()) s += std::norm(v);
  return s;
}

double frobenius_norm(const ComplexMatrix& a) { return std::sqrt(frobenius_norm_sq(a)); }

double row_norm_sq(const ComplexMatrix& a, std::size_t r) {
  double s = 0.0;
  for (const auto& v : a.row(r)) s += std::norm(v);
  return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

QrFactors qr_decompose(const ComplexMatrix& a) {
  require(a.is_square(), "qr_decompose: matrix not square");
  require(a.all_finite(), "qr_decompose: non-finite entries");
  const std::size_t n = a.rows();
  ComplexMatrix r = a;
  ComplexMatrix q = ComplexMatrix::identity(n);
  std::vector<cplx> v(n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    double below = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) below += std::norm(r(i, k));
    if (below == 0.0) continue;
    const double xnorm = std::sqrt(below + std::norm(r(k, k)));
    // Reflect x onto -phase(x0)*|x| e1, the cancellation-free choice.
    const cplx x0 = r(k, k);
    const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx{1.0, 0.0};
    const cplx alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), cplx{});
    v[k] = x0 - alpha;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = r(i, k);
    double vnorm_sq = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm_sq += std::norm(v[i]);
    const double beta = 2.0 / vnorm_sq;

    // R <- (I - beta v v^H) R
    for (std::size_t j = k; j < n; ++j) {
      cplx dot{};
      for (std::size_t i = k; i < n; ++i) dot += std::conj(v[i]) * r(i, j);
      dot *= beta;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= v[i] * dot;
    }
    // Q <- Q (I - beta v v^H)
    for (std::size_t i = 0; i < n; ++i) {
      cplx dot{};
      for (std::size_t j = k; j < n; ++j) dot += q(i, j) * v[j];
      dot *= beta;
      for (std::size_t j = k; j < n; ++j) q(i, j) -= dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
  }

  // Phase normalization: R <- D^H R, Q <- Q D with D = diag(phase(R_kk)).
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag == 0.0) continue;
    const cplx d = r(k, k) / mag;
    const cplx dc = std::conj(d);
    for (std::size_t j = k; j < n; ++j) r(k, j) *= dc;
    r(k, k) = mag;
    for (std::size_t i = 0; i < n; ++i) q(i, k) *= d;
  }
  return {std::move(q), std::move(r)};
}

ComplexMatrix cholesky(const ComplexMatrix& a) {
  require(a.is_square(), "cholesky: matrix not square");
  const std::size_t n = a.rows();
  ComplexMatrix l(n, n);
  double dmax = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j).real();
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l(j, k));
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw SingularMatrixError("cholesky: matrix not positive definite",
                                std::numeric_limits<double>::infinity());
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    dmax = std::max(dmax, ljj);
    dmin = std::min(dmin, ljj);
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  const double cond = (dmax / dmin) * (dmax / dmin);
  if (cond > kSingularConditionLimit)
    throw SingularMatrixError("cholesky: condition estimate exceeds limit", cond);
  return l;
}

ComplexMatrix hermitian_pd_inverse(const ComplexMatrix& a) {
  const ComplexMatrix l = cholesky(a);
  const std::size_t n = l.rows();
  // Invert L (lower triangular), then A^{-1} = L^{-H} L^{-1}.
  ComplexMatrix linv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / l(j, j).real();
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s{};
      for (std::size_t k = j; k < i; ++k) s -= l(i, k) * linv(k, j);
      linv(i, j) = s / l(i, i).real();
    }
  }
  ComplexMatrix inv = adjoint_multiply(linv, linv);
  // Exact Hermitian symmetry for downstream trace/eig use.
  for (std::size_t i = 0; i < n; ++i) {
    inv(i, i) = inv(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx m = 0.5 * (inv(i, j) + std::conj(inv(j, i)));
      inv(i, j) = m;
      inv(j, i) = std::conj(m);
    }
  }
  return inv;
}

double hermitian_pd_logdet(const ComplexMatrix& a) {
  const ComplexMatrix l = cholesky(a);
  double s = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
  return 2.0 * s;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a) {
  require(a.rows() <= a.cols(), "pseudo_inverse: expects rows <= cols");
  return adjoint_multiply(a, hermitian_pd_inverse(multiply_adjoint(a, a)));
}

namespace {

double off_diagonal_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

void check_hermitian(const ComplexMatrix& a) {
  require(a.is_square(), "hermitian_eig: matrix not square");
  const double scale = frobenius_norm(a);
  if (scale == 0.0) return;
  double asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) asym += std::norm(a(i, j) - std::conj(a(j, i)));
  require(std::sqrt(asym) / scale < 1e-10, "hermitian_eig: matrix not Hermitian");
}

// Cyclic Jacobi sweeps; vectors accumulated only when v != nullptr.
void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) {
  const std::size_t n = a.rows();
  const double total = frobenius_norm_sq(a);
  if (total == 0.0) return;
  const double tol = 1e-30 * total;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm_sq(a) <= tol) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq_abs = std::abs(a(p, q));
        if (apq_abs == 0.0) continue;
        const cplx phase = a(p, q) / apq_abs;  // a_pq = |a_pq| e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * apq_abs);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J acts on the (p, q) plane: J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        // so that J^H A J has a zero (p, q) entry.
        const cplx jpp = c;
        const cplx jpq = s;
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);
        // A <- A J (columns p, q)
        for (std::size_t i = 0; i < n; ++i) {
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = aip * jpp + aiq * jqp;
          a(i, q) = aip * jpq + aiq * jqq;
        }
        // A <- J^H A (rows p, q)
        for (std::size_t j = 0; j < n; ++j) {
          const cplx apj = a(p, j);
          const cplx aqj = a(q, j);
          a(p, j) = std::conj(jpp) * apj + std::conj(jqp) * aqj;
          a(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v) {
          for (std::size_t i = 0; i < n; ++i) {
            const cplx vip = (*v)(i, p);
            const cplx viq = (*v)(i, q);
            (*v)(i, p) = vip * jpp + viq * jqp;
            (*v)(i, q) = vip * jpq + viq * jqq;
          }
        }
      }
    }
  }
}

}  // namespace

HermitianEigen hermitian_eig(const ComplexMatrix& a) {
  check_hermitian(a);
  const std::size_t n = a.rows();
  ComplexMatrix work = a;
  ComplexMatrix vecs = ComplexMatrix::identity(n);
  jacobi_diagonalize(work, &vecs);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return work(i, i).real() > work(j, j).real(); });
  HermitianEigen out{ComplexMatrix(n, n), std::vector<double>(n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = work(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = vecs(r, order[c]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  check_hermitian(a);
  ComplexMatrix work = a;
  jacobi_diagonalize(work, nullptr);
  std::vector<double> vals(a.rows());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = work(i, i).real();
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return vals;
}

std::vector<cplx> back_substitute(const ComplexMatrix& r, std::span<const cplx> y) {
  require(r.is_square() && r.rows() == y.size(), "back_substitute: dimension mismatch");
  const std::size_t n = r.rows();
  std::vector<cplx> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cplx s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r(i, j) * x[j];
    x[i] = s / r(i, i);
  }
  return x;
}

}  // namespace relaycap
