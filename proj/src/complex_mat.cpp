#include "solitonlab/complex_mat.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace solitonlab {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Cx(1.0, 0.0);
  return m;
}

CMatrix CMatrix::diag(const std::vector<Cx>& d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

static void check_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInputError(std::string("CMatrix ") + op + ": shape mismatch");
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  check_same_shape(*this, o, "+");
  CMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  check_same_shape(*this, o, "-");
  CMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_)
    throw InvalidInputError("CMatrix *: inner dimensions differ");
  CMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Cx aik = a_[i * cols_ + k];
      if (aik == Cx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        r.a_[i * o.cols_ + j] += aik * o.a_[k * o.cols_ + j];
    }
  }
  return r;
}

CMatrix CMatrix::operator*(Cx s) const {
  CMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

double CMatrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Cx& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double best = 0.0;
  for (const Cx& v : a_) best = std::max(best, std::abs(v));
  return best;
}

namespace {

constexpr double kPivotFloorScale = 1e-14;

struct LuFactors {
  CMatrix lu;              // packed L (unit diagonal) and U
  std::vector<std::size_t> perm;
  int sign = 1;
  double pivot_floor = 0.0;
};

// Doolittle elimination with row pivoting. The caller decides whether a
// sub-floor pivot is an error (inversion) or a plain zero (determinant).
LuFactors factorize(const CMatrix& m, bool throw_on_singular) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n)
    throw InvalidInputError("lu: matrix must be square and nonempty");

  LuFactors f{m, {}, 1, 0.0};
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  double max_row_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(m(i, j));
    max_row_norm = std::max(max_row_norm, s);
  }
  f.pivot_floor = kPivotFloorScale * max_row_norm;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(f.lu(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      const double v = std::abs(f.lu(i, col));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (!(best > f.pivot_floor)) {
      if (throw_on_singular)
        throw SingularMatrixError("lu_invert: pivot " + std::to_string(col) +
                                  " below relative floor");
      // Elimination cannot continue, but every remaining diagonal factor is
      // at most `best`, so the determinant is this tiny pivot times the
      // rest; report it through the packed diagonal and stop.
      if (piv != col) {
        for (std::size_t j = 0; j < n; ++j)
          std::swap(f.lu(col, j), f.lu(piv, j));
        f.sign = -f.sign;
      }
      return f;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(col, j), f.lu(piv, j));
      std::swap(f.perm[col], f.perm[piv]);
      f.sign = -f.sign;
    }
    const Cx d = f.lu(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const Cx l = f.lu(i, col) / d;
      f.lu(i, col) = l;
      if (l == Cx(0.0, 0.0)) continue;
      for (std::size_t j = col + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(col, j);
    }
  }
  return f;
}

}  // namespace

LuResult lu_invert(const CMatrix& m) {
  const std::size_t n = m.rows();
  LuFactors f = factorize(m, true);

  Cx det(static_cast<double>(f.sign), 0.0);
  for (std::size_t i = 0; i < n; ++i) det *= f.lu(i, i);

  // Solve A x = e_{perm} column by column through the packed factors.
  CMatrix inv(n, n);
  std::vector<Cx> y(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      Cx s = (f.perm[i] == col) ? Cx(1.0, 0.0) : Cx(0.0, 0.0);
      for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Cx s = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * inv(j, col);
      inv(ii, col) = s / f.lu(ii, ii);
    }
  }
  return LuResult{std::move(inv), det};
}

Cx lu_det(const CMatrix& m) {
  LuFactors f = factorize(m, false);
  Cx det(static_cast<double>(f.sign), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) det *= f.lu(i, i);
  return det;
}

}  // namespace solitonlab
