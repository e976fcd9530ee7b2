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

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "probtable/float_linalg.hpp"
#include "probtable/matrix.hpp"
#include "probtable/table.hpp"
#include "probtable/tolerances.hpp"

namespace probtable {

/// The table after row/column rearrangement, split into blocks
///
///   p' = ( a  b )      with a nonsingular K x K,
///        ( c  d )
///
/// where p'(i, j) = p(row_perm[i], col_perm[j]). The d block carries no
/// information of its own: d = c a^-1 b at the true rank.
template <class T>
struct BlockForm {
  std::size_t rank = 0;
  std::vector<std::size_t> row_perm, col_perm;
  Matrix<T> a, b, c, d;
};

/// Rank factorization of a table: p_ij = r_i . s_j with K-dimensional
/// preparation vectors s_j and result vectors r_i, both reported in the
/// original row/column order so labels stay attached. The free basis
/// matrix x fixes the first K (permuted) preparation vectors.
template <class T>
struct Decomposition {
  std::size_t rank = 0;
  Matrix<T> basis_x;
  std::vector<std::vector<T>> prep_vectors;    // M entries, original order
  std::vector<std::vector<T>> result_vectors;  // L entries, original order
  std::vector<std::string> prep_labels;
  std::vector<InterventionSpec> interventions;
  std::vector<std::size_t> row_perm, col_perm;  // audit trail of the pivoting

  // present when produced by decompose(); absent after deserialization
  std::optional<BlockForm<T>> block;
  std::optional<Matrix<T>> factor_v, factor_w, factor_y;

  static constexpr ValueMode mode() { return Table<T>::mode(); }

  std::size_t num_rows() const { return result_vectors.size(); }
  std::size_t num_preps() const { return prep_vectors.size(); }
  std::size_t row_offset(std::size_t k) const {
    std::size_t offset = 0;
    for (std::size_t t = 0; t < k; ++t) offset += interventions[t].results.size();
    return offset;
  }
};

inline std::size_t matrix_rank(const Matrix<Rational>& m,
                               double /*tol_rank*/ = 0.0) {
  return exact_rank(m);
}
inline std::size_t matrix_rank(const Matrix<double>& m, double tol_rank = 0.0) {
  return svd_rank(m, tol_rank);
}

/// Rank of the entry matrix: exact elimination in rational mode,
/// singular-value counting in floating mode.
template <class T>
std::size_t numerical_rank(const Table<T>& table, double tol_rank = 0.0) {
  return matrix_rank(table.entries(), tol_rank);
}

namespace detail {

inline std::vector<std::size_t> complete_permutation(
    std::vector<std::size_t> picked, std::size_t n) {
  std::vector<bool> used(n, false);
  for (std::size_t i : picked) used[i] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) picked.push_back(i);
  return picked;
}

}  // namespace detail

/// Rearranges rows and columns so the leading K x K block is nonsingular.
/// Rational mode scans for the first independent rows/columns in index
/// order, so a table whose leading minor is already nonsingular keeps
/// identity permutations. Floating mode uses complete pivoting with ties
/// broken toward the lowest (row, column) index.
template <class T>
BlockForm<T> pivot_block_form(const Table<T>& table,
                              const Tolerances& tol = {}) {
  const Matrix<T>& p = table.entries();
  const std::size_t n_rows = p.rows(), n_cols = p.cols();

  BlockForm<T> bf;
  std::vector<std::size_t> pivot_rows, pivot_cols;
  if constexpr (std::is_same_v<T, Rational>) {
    bf.rank = exact_rank(p);
    pivot_rows = first_independent_rows(p);
    pivot_cols = first_independent_cols(p);
  } else {
    bf.rank = svd_rank(p, tol.rank);
    const double pivot_tol =
        tol.pivot > 0.0 ? tol.pivot : detail::default_pivot_tol(p);
    const PivotSelection sel = complete_pivot_selection(p, bf.rank, pivot_tol);
    pivot_rows = sel.rows;
    pivot_cols = sel.cols;
  }

  bf.row_perm = detail::complete_permutation(pivot_rows, n_rows);
  bf.col_perm = detail::complete_permutation(pivot_cols, n_cols);

  const std::size_t k = bf.rank;
  std::vector<std::size_t> top(bf.row_perm.begin(), bf.row_perm.begin() + k);
  std::vector<std::size_t> bottom(bf.row_perm.begin() + k, bf.row_perm.end());
  std::vector<std::size_t> left(bf.col_perm.begin(), bf.col_perm.begin() + k);
  std::vector<std::size_t> right(bf.col_perm.begin() + k, bf.col_perm.end());

  bf.a = p.submatrix(top, left);
  bf.b = p.submatrix(top, right);
  bf.c = p.submatrix(bottom, left);
  bf.d = p.submatrix(bottom, right);

  if (!try_inverse(bf.a, tol.pivot > 0 ? tol.pivot : -1))
    throw DegenerateTable("pivot block of size " + std::to_string(k) +
                          " is singular");
  return bf;
}

/// Solves the block equations for the two vector families:
///
///   (s_1 ... s_K) = x          (s_{K+1} ... s_M) = x a^-1 b
///   (r_1 ... r_K)^T = a x^-1   (r_{K+1} ... r_L)^T = c x^-1
///
/// then undoes the permutations. Any nonsingular x is admissible; the
/// identity is the default canonical choice.
template <class T>
Decomposition<T> decompose(const Table<T>& table,
                           std::optional<Matrix<T>> basis = std::nullopt,
                           const Tolerances& tol = {}) {
  BlockForm<T> bf = pivot_block_form(table, tol);
  const std::size_t k = bf.rank;

  Matrix<T> x = basis.value_or(Matrix<T>::identity(k));
  if (x.rows() != k || x.cols() != k)
    throw SingularBasisMatrix("basis matrix must be " + std::to_string(k) +
                              "x" + std::to_string(k));
  auto x_inv = try_inverse(x);
  if (!x_inv) throw SingularBasisMatrix("basis matrix is singular");

  auto a_inv = try_inverse(bf.a, tol.pivot > 0 ? tol.pivot : -1);
  if (!a_inv) throw DegenerateTable("pivot block is singular");

  Decomposition<T> dec;
  dec.rank = k;
  dec.basis_x = x;
  dec.prep_labels = table.preparations();
  dec.interventions = table.interventions();
  dec.row_perm = bf.row_perm;
  dec.col_perm = bf.col_perm;

  const Matrix<T> y = bf.b.empty() ? Matrix<T>(k, 0) : x * (*a_inv) * bf.b;
  const Matrix<T> v = bf.a * (*x_inv);
  const Matrix<T> w = bf.c.empty() ? Matrix<T>(0, k) : bf.c * (*x_inv);

  dec.prep_vectors.assign(table.num_preps(), {});
  for (std::size_t j = 0; j < table.num_preps(); ++j) {
    std::vector<T> s(k);
    for (std::size_t t = 0; t < k; ++t)
      s[t] = j < k ? x(t, j) : y(t, j - k);
    dec.prep_vectors[bf.col_perm[j]] = std::move(s);
  }
  dec.result_vectors.assign(table.num_rows(), {});
  for (std::size_t i = 0; i < table.num_rows(); ++i) {
    std::vector<T> r(k);
    for (std::size_t t = 0; t < k; ++t)
      r[t] = i < k ? v(i, t) : w(i - k, t);
    dec.result_vectors[bf.row_perm[i]] = std::move(r);
  }

  dec.factor_v = v;
  dec.factor_w = w;
  dec.factor_y = y;
  dec.block = std::move(bf);

  // scalar-product reconstruction must reproduce the table
  for (std::size_t i = 0; i < table.num_rows(); ++i)
    for (std::size_t j = 0; j < table.num_preps(); ++j) {
      const T err = dot(dec.result_vectors[i], dec.prep_vectors[j]) -
                    table.entry(i, j);
      if (!is_zero(err, tol.rec))
        throw DegenerateTable("reconstruction error at (" +
                              std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") exceeds tolerance");
    }
  return dec;
}

template <class T>
Decomposition<T> decompose(const Table<T>& table, const Matrix<T>& basis,
                           const Tolerances& tol = {}) {
  return decompose(table, std::optional<Matrix<T>>(basis), tol);
}

/// Rebuilds the table entry-by-entry from the scalar products.
template <class T>
Table<T> reconstruct(const Decomposition<T>& dec,
                     double tol_norm = Tolerances{}.norm) {
  Matrix<T> entries(dec.num_rows(), dec.num_preps());
  for (std::size_t i = 0; i < dec.num_rows(); ++i)
    for (std::size_t j = 0; j < dec.num_preps(); ++j)
      entries(i, j) = dot(dec.result_vectors[i], dec.prep_vectors[j]);
  return Table<T>::build(dec.prep_labels, dec.interventions,
                         std::move(entries), tol_norm);
}

/// d = c a^-1 b: the redundant block is fixed by the other three.
template <class T>
bool verify_redundant_block(const BlockForm<T>& bf,
                            double tol_rec = Tolerances{}.rec) {
  if (bf.d.empty()) return true;
  auto a_inv = try_inverse(bf.a);
  if (!a_inv) return false;
  const Matrix<T> expected = bf.c * (*a_inv) * bf.b;
  for (std::size_t i = 0; i < bf.d.rows(); ++i)
    for (std::size_t j = 0; j < bf.d.cols(); ++j)
      if (!is_zero(T(bf.d(i, j) - expected(i, j)), tol_rec)) return false;
  return true;
}

struct CompressionStats {
  std::size_t original = 0;    // L * M
  std::size_t compressed = 0;  // K * (L + M) - K^2
  std::size_t saving = 0;
};

inline CompressionStats compression_stats(std::size_t n_rows,
                                          std::size_t n_cols,
                                          std::size_t rank) {
  if (rank < 1 || rank > std::min(n_rows, n_cols))
    throw Error("rank " + std::to_string(rank) +
                " is outside [1, min(L, M)]");
  CompressionStats st;
  st.original = n_rows * n_cols;
  st.compressed = rank * (n_rows + n_cols) - rank * rank;
  st.saving = st.original - st.compressed;
  return st;
}

}  // namespace probtable
