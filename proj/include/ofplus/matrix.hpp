#pragma once

#include <cstddef>
#include <vector>

#include "ofplus/errors.hpp"
#include "ofplus/scalar.hpp"

namespace ofplus {

/// Dense row-major matrix, 0-based. Small and exact; nothing here is tuned for
/// large dimensions.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  /// Entrywise complex conjugate (the bar of F, not the adjoint).
  Matrix conjugate() const {
    Matrix out(rows_, cols_);
    for (std::size_t n = 0; n < data_.size(); ++n) out.data_[n] = conj(data_[n]);
    return out;
  }

  Matrix adjoint() const { return conjugate().transpose(); }

  T trace() const {
    T sum(0);
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) sum += (*this)(i, i);
    return sum;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product: shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& x = a(r, k);
        if (is_zero(x)) continue;
        for (std::size_t c = 0; c < b.cols_; ++c)
          if (!is_zero(b(k, c))) out(r, c) += x * b(k, c);
      }
    return out;
  }

  friend Matrix operator*(const T& s, Matrix m) {
    for (auto& x : m.data_) x = s * x;
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Entrywise comparison under the field's notion of nearness.
  friend bool near(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t n = 0; n < a.data_.size(); ++n)
      if (!near(a.data_[n], b.data_[n])) return false;
    return true;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Gauss-Jordan inverse. Over the rationals each column pivots on the non-zero
/// entry with the shortest numerator/denominator; over floats, on the largest.
template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (!m.square()) throw DomainError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<T> a = m;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = n;
    for (std::size_t r = col; r < n; ++r) {
      if (is_zero(a(r, col))) continue;
      if (best == n || pivot_cost(a(r, col)) < pivot_cost(a(best, col))) best = r;
    }
    if (best == n) throw DomainError("matrix is singular");
    if (best != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(best, c), a(col, c));
        std::swap(inv(best, c), inv(col, c));
      }
    const T p = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) = a(col, c) / p;
      inv(col, c) = inv(col, c) / p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || is_zero(a(r, col))) continue;
      const T f = a(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        if (!is_zero(a(col, c))) a(r, c) -= f * a(col, c);
        if (!is_zero(inv(col, c))) inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

template <class T>
Matrix<T> from_rows(const std::vector<std::vector<T>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.front().size();
  Matrix<T> out(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != m) throw DomainError("ragged matrix rows");
    for (std::size_t c = 0; c < m; ++c) out(r, c) = rows[r][c];
  }
  return out;
}

template <class R>
Matrix<Complex<Real>> to_approx(const Matrix<Complex<R>>& m) {
  Matrix<Complex<Real>> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if constexpr (field_traits<R>::exact)
        out(r, c) = to_approx(m(r, c));
      else
        out(r, c) = m(r, c);
    }
  return out;
}

}  // namespace ofplus
