// Copyright 2026 The probtable Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "probtable/errors.hpp"
#include "probtable/rational.hpp"

namespace probtable {

/// Minimal dense row-major matrix. The exact-arithmetic mode instantiates
/// it with Rational, the floating mode with double; elimination-heavy
/// routines below branch on the scalar where pivoting rules differ.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    assert(data_.size() == rows_ * cols_);
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::vector<T> row(std::size_t i) const {
    std::vector<T> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  Matrix transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix submatrix(const std::vector<std::size_t>& row_idx,
                   const std::vector<std::size_t>& col_idx) const {
    Matrix out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
      for (std::size_t j = 0; j < col_idx.size(); ++j)
        out(i, j) = (*this)(row_idx[i], col_idx[j]);
    return out;
  }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matrix product shape mismatch");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline double scalar_abs(double v) { return std::abs(v); }
inline Rational scalar_abs(const Rational& v) {
  return v < 0 ? Rational(-v) : v;
}

inline bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
inline bool is_zero(const Rational& v, double /*tol*/) { return v == 0; }

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  assert(a.size() == b.size());
  T out{};
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

template <class T>
double max_abs(const Matrix<T>& m) {
  double out = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out = std::max(out, std::abs(to_double(m(i, j))));
  return out;
}

namespace detail {

// Pivot threshold used by elimination on doubles when the caller does not
// supply one. Exact scalars ignore it (only true zeros are rejected).
template <class T>
double default_pivot_tol(const Matrix<T>& m) {
  if constexpr (std::is_same_v<T, double>) {
    return static_cast<double>(std::max(m.rows(), m.cols())) *
           std::numeric_limits<double>::epsilon() * max_abs(m);
  } else {
    return 0.0;
  }
}

}  // namespace detail

/// Solves A X = B by Gauss-Jordan elimination. Doubles use partial
/// pivoting (largest magnitude, lowest row index on ties); rationals take
/// the first nonzero pivot. Returns nullopt when A is singular at `tol`.
template <class T>
std::optional<Matrix<T>> try_solve(Matrix<T> a, Matrix<T> b, double tol = -1) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw DimensionMismatch("solve expects square A and conforming B");
  const std::size_t n = a.rows();
  if (tol < 0) tol = detail::default_pivot_tol(a);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_same_v<T, double>) {
      double best = tol;
      for (std::size_t r = col; r < n; ++r) {
        if (std::abs(a(r, col)) > best) {
          best = std::abs(a(r, col));
          pivot = r;
        }
      }
    } else {
      for (std::size_t r = col; r < n; ++r) {
        if (!is_zero(a(r, col), tol)) {
          pivot = r;
          break;
        }
      }
    }
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      for (std::size_t j = 0; j < b.cols(); ++j)
        std::swap(b(col, j), b(pivot, j));
    }
    const T p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) a(col, j) = a(col, j) / p;
    for (std::size_t j = 0; j < b.cols(); ++j) b(col, j) = b(col, j) / p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = a(r, col);
      if (is_zero(f, 0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) a(r, j) -= f * a(col, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) -= f * b(col, j);
    }
  }
  return b;
}

template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b, double tol = -1) {
  auto x = try_solve(a, b, tol);
  if (!x) throw SingularMatrixError("singular system");
  return *x;
}

template <class T>
std::optional<Matrix<T>> try_inverse(const Matrix<T>& a, double tol = -1) {
  return try_solve(a, Matrix<T>::identity(a.rows()), tol);
}

/// Greedy scan for the lexicographically first maximal set of linearly
/// independent rows. Exact for rationals; doubles compare against `tol`.
template <class T>
std::vector<std::size_t> first_independent_rows(const Matrix<T>& m,
                                                double tol = -1) {
  if (tol < 0) tol = detail::default_pivot_tol(m);
  std::vector<std::size_t> picked;
  std::vector<std::vector<T>> reduced;   // reduced representatives
  std::vector<std::size_t> pivot_cols;   // pivot column per representative
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<T> row = m.row(i);
    for (std::size_t r = 0; r < reduced.size(); ++r) {
      const T& lead = row[pivot_cols[r]];
      if (is_zero(lead, 0.0)) continue;
      const T f = lead / reduced[r][pivot_cols[r]];
      for (std::size_t j = 0; j < row.size(); ++j)
        row[j] -= f * reduced[r][j];
    }
    std::size_t pc = row.size();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!is_zero(row[j], tol)) {
        pc = j;
        break;
      }
    }
    if (pc == row.size()) continue;
    picked.push_back(i);
    reduced.push_back(std::move(row));
    pivot_cols.push_back(pc);
  }
  return picked;
}

template <class T>
std::vector<std::size_t> first_independent_cols(const Matrix<T>& m,
                                                double tol = -1) {
  return first_independent_rows(m.transposed(), tol);
}

/// Exact rank via fraction-exact Gaussian elimination.
inline std::size_t exact_rank(const Matrix<Rational>& m) {
  return first_independent_rows(m).size();
}

/// Pivot positions chosen by complete pivoting, in selection order.
/// Throws DegenerateTable when fewer than `count` pivots exceed `tol`.
struct PivotSelection {
  std::vector<std::size_t> rows, cols;
};

inline PivotSelection complete_pivot_selection(Matrix<double> w,
                                               std::size_t count,
                                               double tol) {
  const std::size_t n_rows = w.rows(), n_cols = w.cols();
  std::vector<bool> row_used(n_rows, false), col_used(n_cols, false);
  PivotSelection sel;
  for (std::size_t step = 0; step < count; ++step) {
    double best = tol;
    std::size_t br = n_rows, bc = n_cols;
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < n_cols; ++c) {
        if (col_used[c]) continue;
        if (std::abs(w(r, c)) > best) {
          best = std::abs(w(r, c));
          br = r;
          bc = c;
        }
      }
    }
    if (br == n_rows)
      throw DegenerateTable(
          "no usable pivot at elimination step " + std::to_string(step + 1) +
          "; the numerical rank is inconsistent with the pivot tolerance");
    sel.rows.push_back(br);
    sel.cols.push_back(bc);
    row_used[br] = true;
    col_used[bc] = true;
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (row_used[r]) continue;
      const double f = w(r, bc) / w(br, bc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n_cols; ++c) {
        if (col_used[c]) continue;
        w(r, c) -= f * w(br, c);
      }
    }
  }
  return sel;
}

}  // namespace probtable
