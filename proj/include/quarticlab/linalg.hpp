#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "quarticlab/errors.hpp"
#include "quarticlab/field.hpp"
#include "quarticlab/form.hpp"

namespace qlab {

template <FieldElement K>
class Matrix {
 public:
  using Field = FieldOf<K>;

  Matrix(Field field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

  // Row-major construction; every row must have the same length and field.
  Matrix(Field field, const std::vector<std::vector<K>>& rows) : Matrix(field, rows.size(), rows.empty() ? 0 : rows[0].size()) {
    for (std::size_t r = 0; r < rows_; ++r) {
      require(rows[r].size() == cols_, "ragged matrix rows");
      for (std::size_t c = 0; c < cols_; ++c) {
        if (rows[r][c].field() != field_) raise(ErrorKind::FieldMismatch, "matrix entry from another field");
        (*this)(r, c) = rows[r][c];
      }
    }
  }

  static Matrix identity(Field field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const K& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<K> row(std::size_t r) const { return {data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_}; }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r + 1; c < cols_; ++c)
        if (!((*this)(r, c) == (*this)(c, r))) return false;
    return true;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  std::vector<K> apply(std::span<const K> v) const {
    require(v.size() == cols_, "matrix-vector size mismatch");
    std::vector<K> out(rows_, field_.zero());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  // u^T M v
  K bilinear(std::span<const K> u, std::span<const K> v) const {
    require(u.size() == rows_ && v.size() == cols_, "bilinear form size mismatch");
    K acc = field_.zero();
    for (std::size_t r = 0; r < rows_; ++r) {
      if (u[r].is_zero()) continue;
      K s = field_.zero();
      for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * v[c];
      acc += u[r] * s;
    }
    return acc;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix sum size mismatch");
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
  }

  friend Matrix operator*(const K& s, const Matrix& a) {
    Matrix r = a;
    for (auto& x : r.data_) x *= s;
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, "matrix product size mismatch");
    Matrix r(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      if (!(a.data_[i] == b.data_[i])) return false;
    return true;
  }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<K> data_;
};

template <FieldElement K>
struct Echelon {
  Matrix<K> reduced;                  // reduced row echelon form
  std::vector<std::size_t> pivots;    // pivot column of each nonzero row
};

template <FieldElement K>
Echelon<K> row_reduce(Matrix<K> m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
    const K inv = m(row, col).inverse();
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const K f = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <FieldElement K>
struct RankKernel {
  std::size_t rank;
  // One vector per free column, with a 1 in that column and zeros in the
  // other free columns; ordered by free column.
  std::vector<std::vector<K>> kernel_basis;
};

template <FieldElement K>
RankKernel<K> rank_and_kernel(const Matrix<K>& m) {
  const auto ech = row_reduce(m);
  const auto& rr = ech.reduced;
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ech.pivots) is_pivot[c] = true;
  RankKernel<K> out{ech.pivots.size(), {}};
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<K> v(m.cols(), m.field().zero());
    v[free] = m.field().one();
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) v[ech.pivots[r]] = -rr(r, free);
    out.kernel_basis.push_back(std::move(v));
  }
  return out;
}

template <FieldElement K>
std::size_t rank(const Matrix<K>& m) {
  return row_reduce(m).pivots.size();
}

template <FieldElement K>
K determinant(Matrix<K> m) {
  require(m.rows() == m.cols(), "determinant of a non-square matrix");
  K det = m.field().one();
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && m(sel, col).is_zero()) ++sel;
    if (sel == n) return m.field().zero();
    if (sel != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(sel, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    const K inv = m(col, col).inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero()) continue;
      const K f = m(r, col) * inv;
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

// Solves M x = b for a square invertible M; nullopt when singular.
template <FieldElement K>
std::optional<std::vector<K>> solve(const Matrix<K>& m, std::span<const K> b) {
  require(m.rows() == m.cols() && b.size() == m.rows(), "solve needs a square system");
  Matrix<K> aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  const auto ech = row_reduce(std::move(aug));
  if (ech.pivots.size() != m.rows() || (m.rows() > 0 && ech.pivots.back() >= m.cols())) return std::nullopt;
  std::vector<K> x;
  for (std::size_t r = 0; r < m.rows(); ++r) x.push_back(ech.reduced(r, m.cols()));
  return x;
}

// det(x*A + y*B + z*C) as a ternary form of degree n (char != 2 required
// only by callers that polarize; the expansion itself is characteristic-free).
template <FieldElement K>
SparseForm<K> det_linear_symmetric(const Matrix<K>& a, const Matrix<K>& b, const Matrix<K>& c) {
  const std::size_t n = a.rows();
  require(a.cols() == n && b.rows() == n && b.cols() == n && c.rows() == n && c.cols() == n,
          "det_linear_symmetric needs three n x n matrices");
  if (a.field() != b.field() || a.field() != c.field()) raise(ErrorKind::FieldMismatch, "matrices over different fields");
  require(a.field().characteristic() != 2, "characteristic 2 is not supported");
  require(a.is_symmetric() && b.is_symmetric() && c.is_symmetric(), "det_linear_symmetric needs symmetric matrices");
  require(n >= 1 && n <= 16, "matrix size out of range");
  const auto field = a.field();

  std::vector<SparseForm<K>> entries;
  entries.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t col = 0; col < n; ++col) {
      const std::vector<K> coeffs{a(r, col), b(r, col), c(r, col)};
      entries.push_back(SparseForm<K>::linear(field, coeffs));
    }

  // Laplace expansion along rows with memoized minors keyed by column subset.
  std::vector<std::optional<SparseForm<K>>> memo(std::size_t{1} << n);
  auto minor = [&](auto&& self, std::size_t row, std::size_t cols_mask) -> SparseForm<K> {
    if (row == n) return SparseForm<K>::constant(field.one(), 3);
    if (memo[cols_mask]) return *memo[cols_mask];
    SparseForm<K> acc(field, 3, static_cast<int>(n - row));
    int sign_index = 0;
    for (std::size_t col = 0; col < n; ++col) {
      if (!(cols_mask >> col & 1)) continue;
      const auto& entry = entries[row * n + col];
      if (!entry.is_zero()) {
        auto term = entry * self(self, row + 1, cols_mask & ~(std::size_t{1} << col));
        if (sign_index % 2 == 0) acc += term;
        else acc -= term;
      }
      ++sign_index;
    }
    memo[cols_mask] = acc;
    return acc;
  };
  return minor(minor, 0, (std::size_t{1} << n) - 1);
}

}  // namespace qlab
