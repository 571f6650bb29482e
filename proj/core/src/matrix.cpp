#include "geomopt/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geomopt/errors.hpp"

namespace geomopt {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw InputError("matrix entry count " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  require_finite("matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InputError("ragged rows in matrix literal");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(entries));
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] >= cols_) throw InputError("column index out of range");
      out(i, k) = (*this)(i, cols[k]);
    }
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= rows_) throw InputError("row index out of range");
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(rows[k] * cols_), cols_,
                out.data_.begin() + static_cast<std::ptrdiff_t>(k * cols_));
  }
  return out;
}

Matrix Matrix::principal(std::span<const std::size_t> idx) const {
  if (rows_ != cols_) throw InputError("principal submatrix of a non-square matrix");
  Matrix out(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = (*this)(idx[a], idx[b]);
  return out;
}

bool Matrix::all_finite() const noexcept { return geomopt::all_finite(data_); }

void Matrix::require_finite(const char* what) const {
  if (!all_finite()) throw InputError(std::string(what) + " has a non-finite entry");
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto crow = c.row(i);
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  return c;
}

Matrix operator*(double c, const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto& v : out.row(i)) v *= c;
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) throw InputError("vstack column mismatch");
  std::vector<double> entries(top.entries().begin(), top.entries().end());
  entries.insert(entries.end(), bottom.entries().begin(), bottom.entries().end());
  return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(entries));
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw InputError("matrix-vector dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Vector multiply_transposed(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw InputError("transposed matrix-vector dimension mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (x[i] == 0.0) continue;
    axpy(x[i], a.row(i), y);
  }
  return y;
}

Matrix gram(const Matrix& a) {
  Matrix g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double rp = r[p];
      if (rp == 0.0) continue;
      for (std::size_t q = p; q < a.cols(); ++q) g(p, q) += rp * r[q];
    }
  }
  for (std::size_t p = 0; p < a.cols(); ++p)
    for (std::size_t q = 0; q < p; ++q) g(p, q) = g(q, p);
  return g;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // scaled accumulation keeps tiny and huge vectors from under/overflowing
  double scale = 0.0, ssq = 1.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double ax = std::fabs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return norm2(subtract(a, b));
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("vector length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("vector length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector scaled(std::span<const double> v, double c) {
  Vector out(v.begin(), v.end());
  for (auto& x : out) x *= c;
  return out;
}

void axpy(double c, std::span<const double> b, std::span<double> a) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

bool all_finite(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace geomopt
