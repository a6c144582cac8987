#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "solitonlab/errors.hpp"

namespace solitonlab {

using Cx = std::complex<double>;

// Dense row-major complex matrix. Sized for this project: the linear systems
// are N x N with N <= 64 (one row per discrete eigenvalue) or fixed 3 x 3, so
// everything below is plain O(n^3) with no blocking.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Cx(0.0, 0.0)) {}

  static CMatrix identity(std::size_t n);
  static CMatrix diag(const std::vector<Cx>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Cx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Cx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(Cx s) const;

  CMatrix adjoint() const;

  // max_i sum_j |a_ij|
  double inf_norm() const;
  // sqrt(sum |a_ij|^2)
  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Cx> a_;
};

inline CMatrix operator*(Cx s, const CMatrix& m) { return m * s; }

struct LuResult {
  CMatrix inverse;
  Cx det;
};

// Inverse and determinant via LU with partial (max modulus) pivoting.
// A pivot counts as singular when it is <= 1e-14 times the largest row
// 1-norm of the input, so near-singular systems fail loudly instead of
// returning garbage. Throws SingularMatrixError / InvalidInputError.
LuResult lu_invert(const CMatrix& m);

// Determinant alone. Exact zeros are reported as 0 rather than an error so
// callers can scan |det| over a grid; only shape problems throw.
Cx lu_det(const CMatrix& m);

}  // namespace solitonlab
