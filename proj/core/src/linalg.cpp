#include "geomopt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "geomopt/errors.hpp"

namespace geomopt {
namespace {

constexpr double kJacobiEps = 1e-15;
constexpr int kMaxSweeps = 80;

// Columns of the tall orientation, stored contiguously.
std::vector<Vector> tall_columns(const Matrix& m) {
  const bool tall = m.rows() >= m.cols();
  const std::size_t ncols = tall ? m.cols() : m.rows();
  const std::size_t len = tall ? m.rows() : m.cols();
  std::vector<Vector> cols(ncols, Vector(len));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (tall)
        cols[j][i] = m(i, j);
      else
        cols[i][j] = m(i, j);
    }
  return cols;
}

}  // namespace

Vector singular_values(const Matrix& m) {
  m.require_finite("singular_values input");
  if (m.empty()) return {};
  auto cols = tall_columns(m);
  const std::size_t n = cols.size();
  const std::size_t len = cols.front().size();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto& wp = cols[p];
        auto& wq = cols[q];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
          alpha += wp[i] * wp[i];
          beta += wq[i] * wq[i];
          gamma += wp[i] * wq[i];
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::fabs(gamma) <= kJacobiEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < len; ++i) {
          const double a = wp[i];
          const double b = wq[i];
          wp[i] = c * a - s * b;
          wq[i] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }

  Vector sv(n);
  for (std::size_t j = 0; j < n; ++j) sv[j] = norm2(cols[j]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double largest_singular(const Matrix& m) {
  const auto sv = singular_values(m);
  return sv.empty() ? 0.0 : sv.front();
}

double smallest_nonzero_singular(const Matrix& m, double zero_tol) {
  const auto sv = singular_values(m);
  for (auto it = sv.rbegin(); it != sv.rend(); ++it)
    if (*it > zero_tol) return *it;
  throw DegenerateError("matrix has no singular value above the rank tolerance");
}

double smallest_nonzero_singular(const Matrix& m) {
  const auto sv = singular_values(m);
  if (sv.empty() || sv.front() == 0.0)
    throw DegenerateError("matrix has no singular value above the rank tolerance");
  const double tol = 1e-10 * sv.front();
  for (auto it = sv.rbegin(); it != sv.rend(); ++it)
    if (*it > tol) return *it;
  throw DegenerateError("matrix has no singular value above the rank tolerance");
}

double smoothness_constant(const Matrix& a, bool normalized) {
  if (a.empty()) throw InputError("smoothness constant of an empty matrix");
  const double s = largest_singular(a);
  const double l = s * s;
  return normalized ? l / static_cast<double>(a.rows()) : l;
}

SymmetricEigen symmetric_eigen(const Matrix& s) {
  if (s.rows() != s.cols()) throw InputError("symmetric_eigen needs a square matrix");
  s.require_finite("symmetric_eigen input");
  const std::size_t n = s.rows();
  Matrix a = s;
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      diag += a(p, p) * a(p, p);
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= 1e-30 * diag || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::size_t numerical_rank(const Matrix& m) {
  const auto sv = singular_values(m);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double tol = 1e-10 * sv.front();
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [tol](double x) { return x > tol; }));
}

Vector solve_spd(const Matrix& s, std::span<const double> b) {
  const std::size_t n = s.rows();
  if (s.cols() != n || b.size() != n) throw InputError("solve_spd dimension mismatch");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = s(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) throw DegenerateError("matrix is not positive definite");
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  Vector x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
    x[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

}  // namespace geomopt
