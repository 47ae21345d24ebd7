#pragma once

// Dense exact linear algebra over the library's scalar types. Storage and
// products are Eigen's; elimination is done here because Eigen's decompositions
// choose pivots by magnitude, which is meaningless over finite fields.

#include "hadamard/field.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hadamard {

template <class S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using RowVector = Eigen::Matrix<S, 1, Eigen::Dynamic>;

namespace detail {

inline std::string shape(Eigen::Index r, Eigen::Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace detail

template <class S>
Matrix<S> matmul(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.cols() != b.rows()) {
    throw InputError("matmul shape mismatch: " + detail::shape(a.rows(), a.cols()) + " times " +
                     detail::shape(b.rows(), b.cols()));
  }
  // Exact scalars are expensive and these matrices are mostly zero.
  Matrix<S> out = Matrix<S>::Zero(a.rows(), b.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (is_zero(a(r, k))) continue;
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        if (!is_zero(b(k, c))) out(r, c) += a(r, k) * b(k, c);
      }
    }
  }
  return out;
}

/// Entrywise product.
template <class S>
Matrix<S> hadamard(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError("hadamard shape mismatch: " + detail::shape(a.rows(), a.cols()) + " vs " +
                     detail::shape(b.rows(), b.cols()));
  }
  return a.cwiseProduct(b);
}

template <class S, int R, int C>
bool is_zero(const Eigen::Matrix<S, R, C>& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!is_zero(a.data()[i])) return false;
  }
  return true;
}

/// Fraction-free (Bareiss) forward elimination in place. Returns the rank;
/// when `a` is square and nonsingular, its last diagonal entry ends up as
/// det(a) up to `sign`.
template <class S>
std::size_t bareiss_eliminate(Matrix<S>& a, int& sign) {
  sign = 1;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  S previous(1);
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = r;
    while (pivot < rows && is_zero(a(pivot, c))) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      a.row(pivot).swap(a.row(r));
      sign = -sign;
    }
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      for (Eigen::Index j = c + 1; j < cols; ++j) {
        a(i, j) = (a(i, j) * a(r, c) - a(i, c) * a(r, j)) / previous;
      }
      a(i, c) = S(0);
    }
    previous = a(r, c);
    ++r;
  }
  return static_cast<std::size_t>(r);
}

template <class S>
std::size_t rank(Matrix<S> a) {
  int sign = 1;
  return bareiss_eliminate(a, sign);
}

template <class S>
S det(Matrix<S> a) {
  if (a.rows() != a.cols()) throw InputError("det of non-square " + detail::shape(a.rows(), a.cols()) + " matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return S(1);
  int sign = 1;
  if (bareiss_eliminate(a, sign) < static_cast<std::size_t>(n)) return S(0);
  return sign > 0 ? S(a(n - 1, n - 1)) : S(-a(n - 1, n - 1));
}

/// Solves a x = b exactly; nullopt when the system is inconsistent. Free
/// variables are set to zero.
template <class S>
std::optional<Vector<S>> solve(const Matrix<S>& a, const Vector<S>& b) {
  if (a.rows() != b.rows()) throw InputError("solve: right-hand side has the wrong length");
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Matrix<S> m(rows, cols + 1);
  m.leftCols(cols) = a;
  m.col(cols) = b;
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = r;
    while (pivot < rows && is_zero(m(pivot, c))) ++pivot;
    if (pivot == rows) continue;
    m.row(pivot).swap(m.row(r));
    const S inv = S(1) / m(r, c);
    for (Eigen::Index j = c; j <= cols; ++j) m(r, j) = m(r, j) * inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const S factor = m(i, c);
      for (Eigen::Index j = c; j <= cols; ++j) m(i, j) = m(i, j) - factor * m(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (Eigen::Index i = r; i < rows; ++i) {
    if (!is_zero(m(i, cols))) return std::nullopt;
  }
  Vector<S> x = Vector<S>::Zero(cols);
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) x(pivot_cols[i]) = m(static_cast<Eigen::Index>(i), cols);
  return x;
}

/// Indices of a maximal linearly independent subsequence of `mats`, chosen
/// greedily in input order (first-come pivots). All matrices must share one
/// shape.
template <class S>
std::vector<std::size_t> basis_of_span(std::span<const Matrix<S>> mats) {
  std::vector<std::size_t> chosen;
  if (mats.empty()) return chosen;
  const Eigen::Index rows = mats.front().rows();
  const Eigen::Index cols = mats.front().cols();
  const Eigen::Index len = rows * cols;
  // Echelon rows, each zero at the pivots of all earlier rows.
  std::vector<std::pair<Eigen::Index, std::vector<S>>> echelon;
  for (std::size_t idx = 0; idx < mats.size(); ++idx) {
    const Matrix<S>& m = mats[idx];
    if (m.rows() != rows || m.cols() != cols) {
      throw InputError("basis_of_span: mixed shapes " + detail::shape(rows, cols) + " and " +
                       detail::shape(m.rows(), m.cols()));
    }
    std::vector<S> v(m.data(), m.data() + len);
    for (const auto& [pc, row] : echelon) {
      if (is_zero(v[pc])) continue;
      const S factor = v[pc] / row[pc];
      for (Eigen::Index j = 0; j < len; ++j) {
        if (!is_zero(row[j])) v[j] = v[j] - factor * row[j];
      }
    }
    Eigen::Index pc = 0;
    while (pc < len && is_zero(v[pc])) ++pc;
    if (pc == len) continue;
    echelon.emplace_back(pc, std::move(v));
    chosen.push_back(idx);
  }
  return chosen;
}

/// Coordinates c with m = sum_i c_i basis[i], or nullopt if m is outside the span.
template <class S>
std::optional<Vector<S>> span_coordinates(std::span<const Matrix<S>> basis, const Matrix<S>& m) {
  const Eigen::Index len = m.size();
  Matrix<S> a(len, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].rows() != m.rows() || basis[i].cols() != m.cols()) throw InputError("span_coordinates: shape mismatch");
    a.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector<S>>(basis[i].data(), len);
  }
  const Vector<S> b = Eigen::Map<const Vector<S>>(m.data(), len);
  return solve(a, b);
}

}  // namespace hadamard
