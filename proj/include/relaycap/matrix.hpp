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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaycap {

using cplx = std::complex<double>;

/// Raised when a Gram matrix is too ill-conditioned to invert.
class SingularMatrixError : public std::runtime_error {
public:
  SingularMatrixError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

/// Condition-number ceiling above which Hermitian inversion is refused.
inline constexpr double kSingularConditionLimit = 1e12;

/// Dense complex matrix, row-major. Small sizes only (M, N <= 16 in practice).
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  bool all_finite() const noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(ComplexMatrix lhs, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// A * B^H without forming B^H.
ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b);
/// A^H * B without forming A^H.
ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b);

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x);

cplx trace(const ComplexMatrix& a);
/// tr(A * B) in O(n^2).
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_norm(const ComplexMatrix& a);
double frobenius_norm_sq(const ComplexMatrix& a);
double row_norm_sq(const ComplexMatrix& a, std::size_t r);
/// max_{i,j} |A_ij - B_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

struct QrFactors {
  ComplexMatrix q;  ///< unitary
  ComplexMatrix r;  ///< upper triangular, real nonnegative diagonal
};

/// Householder QR of a square matrix. diag(R) is made real and nonnegative,
/// which pins down the factorization uniquely for full-rank input. Columns
/// that are already zero below the diagonal are left alone, so rank-deficient
/// input yields zero diagonal entries in R.
QrFactors qr_decompose(const ComplexMatrix& a);

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
/// Throws SingularMatrixError when a pivot is nonpositive or the condition
/// estimate (max/min pivot)^2 exceeds kSingularConditionLimit.
ComplexMatrix cholesky(const ComplexMatrix& a);

/// Inverse of a Hermitian positive definite matrix via its Cholesky factor.
ComplexMatrix hermitian_pd_inverse(const ComplexMatrix& a);

/// log(det A) for Hermitian positive definite A (natural log).
double hermitian_pd_logdet(const ComplexMatrix& a);

/// Right pseudo-inverse A^H (A A^H)^{-1} of a wide (M <= N) matrix.
ComplexMatrix pseudo_inverse(const ComplexMatrix& a);

struct HermitianEigen {
  ComplexMatrix vectors;        ///< columns are eigenvectors
  std::vector<double> values;   ///< sorted descending
};

/// Cyclic Jacobi eigendecomposition. Input must be Hermitian to 1e-10
/// relative Frobenius error, otherwise std::invalid_argument.
HermitianEigen hermitian_eig(const ComplexMatrix& a);

/// Eigenvalues only; same algorithm without accumulating vectors.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Solves R x = y for upper-triangular R by back substitution.
std::vector<cplx> back_substitute(const ComplexMatrix& r, std::span<const cplx> y);

}  // namespace relaycap
