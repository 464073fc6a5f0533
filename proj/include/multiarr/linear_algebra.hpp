#pragma once

#include <map>
#include <optional>
#include <vector>

#include "polynomial.hpp"

namespace multiarr {

using Vector = std::vector<FieldElement>;

/// Dense row-major matrix of field elements.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const FieldContext& ctx, std::size_t rows, std::size_t cols)
      : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols, FieldElement(ctx, 0)) {}

  static Matrix identity(const FieldContext& ctx, std::size_t n) {
    Matrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldElement(ctx, 1);
    return m;
  }
  static Matrix from_rows(const FieldContext& ctx, const std::vector<Vector>& rows, std::size_t cols) {
    Matrix m(ctx, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i].at(j);
    return m;
  }

  const FieldContext& context() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  FieldElement& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const FieldElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  Vector apply(const Vector& v) const {
    Vector out(rows_, FieldElement(ctx_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw AlgebraError("matrix shape mismatch");
    Matrix out(a.ctx_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  /// In-place reduced row echelon form. Pivots are chosen as the first nonzero entry
  /// scanning rows top-down within each column, columns left to right. Returns pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t p = r;
      while (p < rows_ && (*this)(p, c).is_zero()) ++p;
      if (p == rows_) continue;
      if (p != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
      const FieldElement inv = (*this)(r, c).inverse();
      for (std::size_t j = c; j < cols_; ++j)
        if (!(*this)(r, j).is_zero()) (*this)(r, j) *= inv;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || (*this)(i, c).is_zero()) continue;
        const FieldElement f = (*this)(i, c);
        for (std::size_t j = c; j < cols_; ++j)
          if (!(*this)(r, j).is_zero()) (*this)(i, j) -= f * (*this)(r, j);
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  std::size_t rank() const {
    Matrix copy = *this;
    return copy.rref().size();
  }

 private:
  FieldContext ctx_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<FieldElement> data_;
};

/// Basis of the right kernel {v : M v = 0}, one vector per free column of the RREF.
inline std::vector<Vector> matrix_kernel(const Matrix& m) {
  Matrix r = m;
  const auto pivots = r.rref();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols(), FieldElement(m.context(), 0));
    v[f] = FieldElement(m.context(), 1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of M x = b, if any.
inline std::optional<Vector> solve_linear(const Matrix& m, const Vector& b) {
  Matrix aug(m.context(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b.at(i);
  }
  const auto pivots = aug.rref();
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vector x(m.cols(), FieldElement(m.context(), 0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

/// Incrementally maintained echelon basis of a subspace of K^n; answers membership
/// and grows only by vectors independent of the current span.
class EchelonSpace {
 public:
  EchelonSpace(const FieldContext& ctx, std::size_t dim) : ctx_(ctx), dim_(dim) {}

  std::size_t dimension() const { return rows_.size(); }
  std::size_t ambient() const { return dim_; }

  Vector reduce(Vector v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (v[p].is_zero()) continue;
      const FieldElement f = v[p];
      const Vector& row = rows_[k];
      for (std::size_t j = p; j < dim_; ++j)
        if (!row[j].is_zero()) v[j] -= f * row[j];
    }
    return v;
  }

  bool contains(const Vector& v) const {
    const Vector r = reduce(v);
    for (const auto& x : r)
      if (!x.is_zero()) return false;
    return true;
  }

  /// Adds v if independent; returns whether the span grew.
  bool insert(const Vector& v) {
    Vector r = reduce(v);
    std::size_t p = 0;
    while (p < dim_ && r[p].is_zero()) ++p;
    if (p == dim_) return false;
    const FieldElement inv = r[p].inverse();
    for (std::size_t j = p; j < dim_; ++j)
      if (!r[j].is_zero()) r[j] *= inv;
    // keep earlier rows reduced at the new pivot so reduce() stays a single pass
    for (auto& row : rows_) {
      if (row[p].is_zero()) continue;
      const FieldElement f = row[p];
      for (std::size_t j = p; j < dim_; ++j)
        if (!r[j].is_zero()) row[j] -= f * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

 private:
  FieldContext ctx_;
  std::size_t dim_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Determinant of a square scalar matrix by elimination.
inline FieldElement determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw AlgebraError("determinant of a non-square matrix");
  Matrix a = m;
  const std::size_t n = a.rows();
  FieldElement det(m.context(), 1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return FieldElement(m.context(), 0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    const FieldElement inv = a(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      const FieldElement f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// Exact determinant of a square polynomial matrix: Laplace expansion along rows,
/// memoized on the set of still-available columns.
inline Polynomial poly_matrix_determinant(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw AlgebraError("determinant of an empty matrix needs a context");
  for (const auto& row : m)
    if (row.size() != n) throw AlgebraError("determinant of a non-square matrix");
  if (n > 20) throw AlgebraError("matrix too large for cofactor expansion");
  const FieldContext ctx = m[0][0].context();
  const std::size_t vars = m[0][0].num_vars();
  std::map<std::uint32_t, Polynomial> memo;
  // det of rows [n - popcount(cols), n) restricted to the column set `cols`
  auto rec = [&](auto&& self, std::uint32_t cols, std::size_t row) -> Polynomial {
    if (row == n) return Polynomial::one(ctx, vars);
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    Polynomial acc(ctx, vars);
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(cols & (1u << c))) continue;
      if (!m[row][c].is_zero()) {
        Polynomial minor = self(self, cols & ~(1u << c), row + 1);
        if (!minor.is_zero()) {
          Polynomial term = m[row][c] * minor;
          if (sign > 0) {
            acc += term;
          } else {
            acc -= term;
          }
        }
      }
      sign = -sign;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  return rec(rec, (n == 32 ? 0xffffffffu : ((1u << n) - 1)), 0);
}

}  // namespace multiarr
