#pragma once

#include "geomopt/matrix.hpp"

namespace geomopt {

/// Singular values in nonincreasing order, length min(rows, cols).
///
/// One-sided (Hestenes) Jacobi on the taller orientation of `m`. Column pairs
/// are rotated until every pair is orthogonal to relative precision 1e-15, so
/// small singular values keep high relative accuracy. Throws InputError on a
/// non-finite entry.
Vector singular_values(const Matrix& m);

/// Largest singular value (0 for an empty matrix).
double largest_singular(const Matrix& m);

/// min { sigma : sigma > zero_tol }. Throws DegenerateError when none exists.
double smallest_nonzero_singular(const Matrix& m, double zero_tol);

/// Same, with the relative rank tolerance 1e-10 * sigma_max.
double smallest_nonzero_singular(const Matrix& m);

/// sigma_max(a)^2, divided by rows(a) when `normalized`.
double smoothness_constant(const Matrix& a, bool normalized);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k is the eigenvector for values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Intended for the
/// small (<= a few dozen rows) systems that arise in Hoffman enumeration.
SymmetricEigen symmetric_eigen(const Matrix& s);

/// Numerical rank with the relative tolerance 1e-10 * sigma_max.
std::size_t numerical_rank(const Matrix& m);

/// Solves S x = b for symmetric positive definite S by Cholesky. Throws
/// DegenerateError when a pivot is not positive.
Vector solve_spd(const Matrix& s, std::span<const double> b);

}  // namespace geomopt
