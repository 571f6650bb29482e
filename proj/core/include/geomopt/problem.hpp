#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "geomopt/matrix.hpp"

namespace geomopt {

/// { x : G x = h, M x <= r }. Either block may be empty.
struct PolyhedralSystem {
  Matrix g_eq;
  Vector h_eq;
  Matrix m_ineq;
  Vector r_ineq;

  std::size_t dim() const;
  std::size_t total_rows() const { return g_eq.rows() + m_ineq.rows(); }
  /// Throws InputError on inconsistent block shapes.
  void validate() const;
  /// || (G x - h ; [M x - r]_+) ||_2
  double residual(std::span<const double> x) const;
};

class PolyhedralProjector;

struct ZeroReg {};
struct L1Reg {
  double eta = 1.0;
};
struct PolyhedralIndicator {
  PolyhedralSystem set;
  std::shared_ptr<const PolyhedralProjector> projector;  // built by make_polyhedral_indicator
};
struct BoxHyperplaneIndicator {
  Vector labels;  // entries +-1
  double c_cap = 1.0;
};

using Regularizer = std::variant<ZeroReg, L1Reg, PolyhedralIndicator, BoxHyperplaneIndicator>;

PolyhedralIndicator make_polyhedral_indicator(PolyhedralSystem set);

enum class SmoothKind { least_squares, least_squares_normalized, quadratic_form };

/// f(x) = 1/2 x^T Q x - linear^T x
struct QuadraticForm {
  Matrix q;
  Vector linear;
};

/// F(x) = f(A x) + g(x).
///
/// For the least-squares kinds f(u) = 1/2 ||u - y||^2, divided by rows(A) when
/// normalized. For quadratic_form the smooth part is the quadratic itself and
/// `a` is optional (for the SVM dual it holds the label-scaled features Z with
/// Q = Z Z^T).
struct CompositeProblem {
  Matrix a;
  Vector y;
  SmoothKind smooth_kind = SmoothKind::least_squares;
  std::optional<QuadraticForm> quadratic;
  Regularizer reg = ZeroReg{};
  std::optional<double> strong_convexity_alpha;

  std::size_t dim() const;
  /// Throws InputError when shapes or parameters are inconsistent.
  void validate() const;
};

std::string to_string(SmoothKind kind);
SmoothKind parse_smooth_kind(const std::string& name);

CompositeProblem make_least_squares(Matrix a, Vector y, bool normalized = false);
CompositeProblem make_lasso(Matrix a, Vector y, double eta, bool normalized = false);
CompositeProblem make_quadratic(Matrix q, Vector linear, Regularizer reg);
/// Dual soft-margin SVM: min 1/2 a^T Q a - 1^T a over {y^T a = 0, 0 <= a <= C}
/// with Q_ij = y_i y_j x_i^T x_j. Throws InputError for single-class labels.
CompositeProblem make_svm_dual(const Matrix& features, const Vector& labels, double c_cap);

bool is_l1(const CompositeProblem& p);
double l1_eta(const CompositeProblem& p);
bool is_normalized(const CompositeProblem& p);

/// alpha of the outer smooth function: the stored value, else 1 (1/n when normalized).
double strong_convexity(const CompositeProblem& p);
/// Global gradient Lipschitz constant of x -> f(Ax).
double smoothness(const CompositeProblem& p);

double smooth_value(const CompositeProblem& p, std::span<const double> x);
/// g(x); +inf when an indicator is violated by more than 1e-9.
double regularizer_value(const CompositeProblem& p, std::span<const double> x);
double objective(const CompositeProblem& p, std::span<const double> x);
Vector gradient_f(const CompositeProblem& p, std::span<const double> x);
/// prox_{lambda g}(v).
Vector prox(const CompositeProblem& p, std::span<const double> v, double lambda);
/// (x - prox(x - lambda grad f(x), lambda)) / lambda
Vector gradient_mapping(const CompositeProblem& p, std::span<const double> x, double lambda);
/// D_g(x, alpha), clamped at 0. Throws DomainError when g(x) is infinite.
double generalized_gradient_size(const CompositeProblem& p, std::span<const double> x, double alpha);

constexpr double kIndicatorTol = 1e-9;

}  // namespace geomopt
