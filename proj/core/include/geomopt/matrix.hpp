#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace geomopt {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;  // sorted, unique

/// Dense row-major matrix of finite doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws InputError if entries.size() != rows * cols or an entry is not finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  /// Builds a matrix from nested rows; all rows must have equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> entries() const noexcept { return data_; }

  Matrix transposed() const;
  Matrix select_columns(std::span<const std::size_t> cols) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  /// Principal submatrix on `idx` (square matrices only).
  Matrix principal(std::span<const std::size_t> idx) const;

  bool all_finite() const noexcept;
  /// Throws InputError naming `what` when an entry is NaN or infinite.
  void require_finite(const char* what) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);
/// Stacks `top` over `bottom`; either may be empty.
Matrix vstack(const Matrix& top, const Matrix& bottom);

/// y = A x
Vector multiply(const Matrix& a, std::span<const double> x);
/// y = A^T x
Vector multiply_transposed(const Matrix& a, std::span<const double> x);
/// A^T A
Matrix gram(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> v, double c);
/// a += c * b
void axpy(double c, std::span<const double> b, std::span<double> a);

bool all_finite(std::span<const double> v) noexcept;

}  // namespace geomopt
