#include "geomopt/problem.hpp"

#include <cmath>
#include <limits>

#include "geomopt/errors.hpp"
#include "geomopt/linalg.hpp"
#include "geomopt/projection.hpp"

namespace geomopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(const CompositeProblem& p, std::span<const double> x) {
  if (x.size() != p.dim())
    throw InputError("point has dimension " + std::to_string(x.size()) + ", problem expects " +
                     std::to_string(p.dim()));
}

// A x - y
Vector residual_vector(const CompositeProblem& p, std::span<const double> x) {
  Vector r = multiply(p.a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.y[i];
  return r;
}

}  // namespace

std::size_t PolyhedralSystem::dim() const {
  if (g_eq.rows() > 0) return g_eq.cols();
  if (m_ineq.rows() > 0) return m_ineq.cols();
  return std::max(g_eq.cols(), m_ineq.cols());
}

void PolyhedralSystem::validate() const {
  if (g_eq.rows() != h_eq.size()) throw InputError("equality block rows do not match h");
  if (m_ineq.rows() != r_ineq.size()) throw InputError("inequality block rows do not match r");
  if (g_eq.rows() > 0 && m_ineq.rows() > 0 && g_eq.cols() != m_ineq.cols())
    throw InputError("equality and inequality blocks disagree on the column count");
  if (!all_finite(h_eq) || !all_finite(r_ineq)) throw InputError("polyhedral right-hand side is not finite");
}

double PolyhedralSystem::residual(std::span<const double> x) const {
  double ssq = 0.0;
  for (std::size_t i = 0; i < g_eq.rows(); ++i) {
    const double e = dot(g_eq.row(i), x) - h_eq[i];
    ssq += e * e;
  }
  for (std::size_t i = 0; i < m_ineq.rows(); ++i) {
    const double e = dot(m_ineq.row(i), x) - r_ineq[i];
    if (e > 0.0) ssq += e * e;
  }
  return std::sqrt(ssq);
}

PolyhedralIndicator make_polyhedral_indicator(PolyhedralSystem set) {
  auto projector = std::make_shared<const PolyhedralProjector>(set);
  return PolyhedralIndicator{std::move(set), std::move(projector)};
}

std::string to_string(SmoothKind kind) {
  switch (kind) {
    case SmoothKind::least_squares:
      return "least_squares";
    case SmoothKind::least_squares_normalized:
      return "least_squares_normalized";
    case SmoothKind::quadratic_form:
      return "quadratic_form";
  }
  return "unknown";
}

SmoothKind parse_smooth_kind(const std::string& name) {
  if (name == "least_squares") return SmoothKind::least_squares;
  if (name == "least_squares_normalized") return SmoothKind::least_squares_normalized;
  if (name == "quadratic_form") return SmoothKind::quadratic_form;
  throw InputError("unknown smooth kind '" + name + "'");
}

std::size_t CompositeProblem::dim() const {
  if (smooth_kind == SmoothKind::quadratic_form && quadratic) return quadratic->q.rows();
  return a.cols();
}

void CompositeProblem::validate() const {
  if (smooth_kind == SmoothKind::quadratic_form) {
    if (!quadratic) throw InputError("quadratic_form problem without Q");
    const auto& q = quadratic->q;
    if (q.rows() != q.cols() || q.rows() == 0) throw InputError("Q must be square and nonempty");
    if (quadratic->linear.size() != q.rows()) throw InputError("linear term length does not match Q");
    const double scale = std::max(1.0, norm_inf(q.entries()));
    for (std::size_t i = 0; i < q.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::fabs(q(i, j) - q(j, i)) > 1e-10 * scale) throw InputError("Q is not symmetric");
    if (symmetric_eigen(q).values.front() < -1e-10 * scale) throw InputError("Q is not positive semidefinite");
  } else {
    if (a.empty()) throw InputError("design matrix is empty");
    if (y.size() != a.rows()) throw InputError("target length does not match the rows of A");
    if (!all_finite(y)) throw InputError("targets are not finite");
  }
  if (strong_convexity_alpha && !(*strong_convexity_alpha > 0.0))
    throw InputError("strong convexity alpha must be positive");
  const std::size_t d = dim();
  std::visit(overloaded{
                 [](const ZeroReg&) {},
                 [](const L1Reg& r) {
                   if (!(r.eta > 0.0) || !std::isfinite(r.eta)) throw InputError("eta must be positive");
                 },
                 [d](const PolyhedralIndicator& r) {
                   r.set.validate();
                   if (r.set.dim() != d) throw InputError("polyhedral set dimension does not match the problem");
                 },
                 [d](const BoxHyperplaneIndicator& r) {
                   if (!(r.c_cap > 0.0) || !std::isfinite(r.c_cap)) throw InputError("box cap must be positive");
                   if (r.labels.size() != d) throw InputError("label count does not match the problem");
                   for (double l : r.labels)
                     if (l != 1.0 && l != -1.0) throw InputError("labels must be +1 or -1");
                 },
             },
             reg);
}

CompositeProblem make_least_squares(Matrix a, Vector y, bool normalized) {
  CompositeProblem p;
  p.a = std::move(a);
  p.y = std::move(y);
  p.smooth_kind = normalized ? SmoothKind::least_squares_normalized : SmoothKind::least_squares;
  p.validate();
  return p;
}

CompositeProblem make_lasso(Matrix a, Vector y, double eta, bool normalized) {
  CompositeProblem p;
  p.a = std::move(a);
  p.y = std::move(y);
  p.smooth_kind = normalized ? SmoothKind::least_squares_normalized : SmoothKind::least_squares;
  p.reg = L1Reg{eta};
  p.validate();
  return p;
}

CompositeProblem make_quadratic(Matrix q, Vector linear, Regularizer reg) {
  CompositeProblem p;
  p.smooth_kind = SmoothKind::quadratic_form;
  p.quadratic = QuadraticForm{std::move(q), std::move(linear)};
  p.reg = std::move(reg);
  p.validate();
  return p;
}

CompositeProblem make_svm_dual(const Matrix& features, const Vector& labels, double c_cap) {
  if (features.rows() != labels.size()) throw InputError("one label per feature row is required");
  bool pos = false, neg = false;
  for (double l : labels) {
    if (l == 1.0)
      pos = true;
    else if (l == -1.0)
      neg = true;
    else
      throw InputError("labels must be +1 or -1");
  }
  if (!pos || !neg) throw InputError("SVM labels must contain both classes");
  Matrix z = features;
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (auto& v : z.row(i)) v *= labels[i];
  Matrix q = gram(z.transposed());
  CompositeProblem p = make_quadratic(std::move(q), Vector(labels.size(), 1.0),
                                      BoxHyperplaneIndicator{labels, c_cap});
  p.a = std::move(z);
  return p;
}

bool is_l1(const CompositeProblem& p) { return std::holds_alternative<L1Reg>(p.reg); }

double l1_eta(const CompositeProblem& p) {
  if (!is_l1(p)) throw InputError("problem does not carry an l1 regularizer");
  return std::get<L1Reg>(p.reg).eta;
}

bool is_normalized(const CompositeProblem& p) {
  return p.smooth_kind == SmoothKind::least_squares_normalized;
}

double strong_convexity(const CompositeProblem& p) {
  if (p.strong_convexity_alpha) return *p.strong_convexity_alpha;
  if (is_normalized(p)) return 1.0 / static_cast<double>(p.a.rows());
  return 1.0;
}

double smoothness(const CompositeProblem& p) {
  if (p.smooth_kind == SmoothKind::quadratic_form) return largest_singular(p.quadratic->q);
  return smoothness_constant(p.a, is_normalized(p));
}

double smooth_value(const CompositeProblem& p, std::span<const double> x) {
  require_dim(p, x);
  if (p.smooth_kind == SmoothKind::quadratic_form) {
    const Vector qx = multiply(p.quadratic->q, x);
    return 0.5 * dot(x, qx) - dot(p.quadratic->linear, x);
  }
  const Vector r = residual_vector(p, x);
  const double half_sq = 0.5 * dot(r, r);
  return is_normalized(p) ? half_sq / static_cast<double>(p.a.rows()) : half_sq;
}

double regularizer_value(const CompositeProblem& p, std::span<const double> x) {
  require_dim(p, x);
  return std::visit(overloaded{
                        [](const ZeroReg&) { return 0.0; },
                        [&](const L1Reg& r) { return r.eta * norm1(x); },
                        [&](const PolyhedralIndicator& r) {
                          return r.set.residual(x) <= kIndicatorTol ? 0.0 : kInf;
                        },
                        [&](const BoxHyperplaneIndicator& r) {
                          for (double v : x)
                            if (v < -kIndicatorTol || v > r.c_cap + kIndicatorTol) return kInf;
                          return std::fabs(dot(r.labels, x)) <= kIndicatorTol ? 0.0 : kInf;
                        },
                    },
                    p.reg);
}

double objective(const CompositeProblem& p, std::span<const double> x) {
  const double g = regularizer_value(p, x);
  if (std::isinf(g)) return g;
  return smooth_value(p, x) + g;
}

Vector gradient_f(const CompositeProblem& p, std::span<const double> x) {
  require_dim(p, x);
  if (p.smooth_kind == SmoothKind::quadratic_form) {
    Vector g = multiply(p.quadratic->q, x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= p.quadratic->linear[i];
    return g;
  }
  Vector g = multiply_transposed(p.a, residual_vector(p, x));
  if (is_normalized(p)) {
    const double inv_n = 1.0 / static_cast<double>(p.a.rows());
    for (auto& v : g) v *= inv_n;
  }
  return g;
}

Vector prox(const CompositeProblem& p, std::span<const double> v, double lambda) {
  require_dim(p, v);
  if (!(lambda > 0.0)) throw InputError("prox parameter must be positive");
  return std::visit(overloaded{
                        [&](const ZeroReg&) { return Vector(v.begin(), v.end()); },
                        [&](const L1Reg& r) { return soft_threshold(v, lambda * r.eta); },
                        [&](const PolyhedralIndicator& r) {
                          if (r.projector) return r.projector->project(v);
                          return PolyhedralProjector(r.set).project(v);
                        },
                        [&](const BoxHyperplaneIndicator& r) {
                          return project_box_hyperplane(v, r.labels, r.c_cap).point;
                        },
                    },
                    p.reg);
}

Vector gradient_mapping(const CompositeProblem& p, std::span<const double> x, double lambda) {
  if (!(lambda > 0.0)) throw InputError("gradient mapping parameter must be positive");
  const Vector g = gradient_f(p, x);
  Vector v(x.begin(), x.end());
  axpy(-lambda, g, v);
  const Vector xp = prox(p, v, lambda);
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - xp[i]) / lambda;
  return out;
}

double generalized_gradient_size(const CompositeProblem& p, std::span<const double> x, double alpha) {
  if (!(alpha > 0.0)) throw InputError("gradient size parameter must be positive");
  const double gx = regularizer_value(p, x);
  if (std::isinf(gx)) throw DomainError("generalized gradient size needs g(x) finite");
  const Vector grad = gradient_f(p, x);
  Vector v(x.begin(), x.end());
  axpy(-1.0 / alpha, grad, v);
  const Vector ys = prox(p, v, 1.0 / alpha);
  const Vector diff = subtract(ys, x);
  double gy = regularizer_value(p, ys);
  if (std::isinf(gy)) gy = 0.0;  // prox output of an indicator is feasible up to round-off
  const double inner = dot(grad, diff) + 0.5 * alpha * dot(diff, diff) + gy - gx;
  return std::max(0.0, -2.0 * alpha * inner);
}

}  // namespace geomopt
