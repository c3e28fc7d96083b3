#pragma once

// Dense row-major matrices over GF(256): rank, solve, Vandermonde generation.

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rglab/gf256.hpp"

namespace rglab {

using gf256::Element;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Element> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw std::invalid_argument("matrix data length does not match shape");
  }

  /// Builds from nested lists of raw byte values (test convenience).
  static Matrix from_rows(std::initializer_list<std::initializer_list<unsigned>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw std::invalid_argument("ragged row list");
      std::size_t j = 0;
      for (unsigned v : row) m(i, j++) = Element(static_cast<std::uint8_t>(v));
      ++i;
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Element(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Element>& data() const { return data_; }

  void append_row(std::span<const Element> r) {
    if (rows_ == 0 && data_.empty()) cols_ = r.size();
    if (r.size() != cols_) throw std::invalid_argument("row width mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix m(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      auto src = row(idx[i]);
      std::copy(src.begin(), src.end(), m.row(i).begin());
    }
    return m;
  }

  Matrix select_cols(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw std::out_of_range("column range");
    Matrix m(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
    return m;
  }

  bool is_zero() const {
    for (Element e : data_)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("shape mismatch in add");
    Matrix s = a;
    for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] += b.data_[i];
    return s;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("shape mismatch in multiply");
    Matrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Element aik = a(i, k);
        if (aik.is_zero()) continue;
        auto prow = p.row(i);
        auto brow = b.row(k);
        for (std::size_t j = 0; j < b.cols_; ++j) prow[j] += aik * brow[j];
      }
    return p;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

/// [a; b]. Either side may be a 0-row matrix.
inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw std::invalid_argument("column mismatch in vstack");
  std::vector<Element> d = a.data();
  d.insert(d.end(), b.data().begin(), b.data().end());
  return Matrix(a.rows() + b.rows(), a.cols(), std::move(d));
}

namespace detail {

/// In-place reduction to reduced row echelon form over the first `pivot_cols`
/// columns. Returns the pivot column of each pivot row, in order. Pivots are
/// searched column by column, taking the first nonzero row at or below the
/// current position.
inline std::vector<std::size_t> row_reduce(Matrix& m, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      auto a = m.row(p), b = m.row(r);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    const Element inv = gf256::inverse(m(r, c));
    for (auto& e : m.row(r)) e *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      const Element f = m(i, c);
      if (f.is_zero()) continue;
      auto dst = m.row(i);
      auto src = m.row(r);
      for (std::size_t j = c; j < m.cols(); ++j) dst[j] += f * src[j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(Matrix m) {
  if (m.empty()) return 0;
  return detail::row_reduce(m, m.cols()).size();
}

/// Returns x with a*x = b. Free variables are set to zero, so the answer is
/// unique exactly when `a` has full column rank.
inline Matrix solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("row mismatch in solve");
  Matrix aug(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
  }
  const auto pivots = detail::row_reduce(aug, a.cols());
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
    for (std::size_t j = a.cols(); j < aug.cols(); ++j)
      if (!aug(i, j).is_zero()) throw std::runtime_error("no solution");
  Matrix x(a.cols(), b.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[i], j) = aug(i, a.cols() + j);
  return x;
}

inline Matrix invert(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("invert needs a square matrix");
  if (rank(a) != a.rows()) throw std::runtime_error("matrix is singular");
  return solve(a, Matrix::identity(a.rows()));
}

/// Entry (i, j) = points[i]^j.
inline Matrix vandermonde(std::size_t rows, std::size_t cols, std::span<const Element> points) {
  if (points.size() != rows) throw std::invalid_argument("vandermonde: need one point per row");
  if (cols > gf256::kOrder - 1) throw std::invalid_argument("vandermonde: too many columns");
  std::set<Element> seen(points.begin(), points.end());
  if (seen.size() != points.size()) throw std::invalid_argument("vandermonde: duplicate evaluation points");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Element x(1);
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = x;
      x *= points[i];
    }
  }
  return m;
}

}  // namespace rglab
