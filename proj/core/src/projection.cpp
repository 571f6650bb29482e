#include "geomopt/projection.hpp"

#include <algorithm>
#include <cmath>

#include "geomopt/errors.hpp"
#include "geomopt/linalg.hpp"

namespace geomopt {

Vector soft_threshold(std::span<const double> v, double threshold) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double mag = std::fabs(v[i]) - threshold;
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

namespace {

constexpr int kActiveCheckEvery = 10;

double clip(double x, double hi) { return std::clamp(x, 0.0, hi); }

double hyperplane_value(std::span<const double> v, std::span<const double> labels, double c, double tau) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += labels[i] * clip(v[i] - tau * labels[i], c);
  return s;
}

}  // namespace

BoxHyperplaneProjection project_box_hyperplane(std::span<const double> v, std::span<const double> labels,
                                               double c_cap) {
  if (v.size() != labels.size()) throw InputError("label count does not match the vector length");
  if (!(c_cap > 0.0)) throw InputError("box cap must be positive");
  constexpr double kTol = 1e-12;
  constexpr int kMaxIter = 200;

  // phi(tau) = labels^T clip(v - tau labels) is nonincreasing in tau
  double width = norm2(v) + c_cap;
  double lo = -width, hi = width;
  for (int i = 0; i < 60 && hyperplane_value(v, labels, c_cap, lo) < 0.0; ++i) lo *= 2.0;
  for (int i = 0; i < 60 && hyperplane_value(v, labels, c_cap, hi) > 0.0; ++i) hi *= 2.0;

  double tau = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxIter; ++it) {
    tau = 0.5 * (lo + hi);
    const double phi = hyperplane_value(v, labels, c_cap, tau);
    if (std::fabs(phi) <= kTol) break;
    if (phi > 0.0)
      lo = tau;
    else
      hi = tau;
    if (hi - lo <= 1e-300) break;
  }

  // phi is affine on the current piece, so one exact solve usually lands on the root
  double fixed = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = v[i] - tau * labels[i];
    if (u <= 0.0) continue;
    if (u >= c_cap) {
      fixed += labels[i] * c_cap;
    } else {
      fixed += labels[i] * v[i];
      ++free_count;
    }
  }
  if (free_count > 0) {
    const double polished = fixed / static_cast<double>(free_count);
    if (std::fabs(hyperplane_value(v, labels, c_cap, polished)) <
        std::fabs(hyperplane_value(v, labels, c_cap, tau)))
      tau = polished;
  }

  BoxHyperplaneProjection out{Vector(v.size()), tau};
  for (std::size_t i = 0; i < v.size(); ++i) out.point[i] = clip(v[i] - tau * labels[i], c_cap);
  return out;
}

PolyhedralProjector::PolyhedralProjector(PolyhedralSystem system, DykstraSettings settings)
    : system_(std::move(system)), settings_(settings) {
  system_.validate();
  if (system_.g_eq.rows() > 0) {
    const Matrix ggt = gram(system_.g_eq.transposed());
    const auto eig = symmetric_eigen(ggt);
    const std::size_t m = ggt.rows();
    const double top = eig.values.empty() ? 0.0 : std::max(0.0, eig.values.back());
    gram_pinv_ = Matrix(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      if (eig.values[k] <= 1e-12 * top || eig.values[k] <= 0.0) continue;
      const double inv = 1.0 / eig.values[k];
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) gram_pinv_(i, j) += inv * eig.vectors(i, k) * eig.vectors(j, k);
    }
  }
  row_norm_sq_.resize(system_.m_ineq.rows());
  for (std::size_t i = 0; i < system_.m_ineq.rows(); ++i) {
    const auto r = system_.m_ineq.row(i);
    row_norm_sq_[i] = dot(r, r);
  }
}

std::optional<Vector> PolyhedralProjector::project_on_active(std::span<const double> v,
                                                            const IndexSet& active) const {
  const auto& g = system_.g_eq;
  const auto& m = system_.m_ineq;
  const std::size_t d = v.size();
  const std::size_t me = g.rows();
  const std::size_t rows = me + active.size();
  if (rows == 0) return std::nullopt;
  Matrix c(rows, d);
  Vector rhs(rows);
  for (std::size_t i = 0; i < me; ++i) {
    std::copy(g.row(i).begin(), g.row(i).end(), c.row(i).begin());
    rhs[i] = system_.h_eq[i];
  }
  for (std::size_t a = 0; a < active.size(); ++a) {
    std::copy(m.row(active[a]).begin(), m.row(active[a]).end(), c.row(me + a).begin());
    rhs[me + a] = system_.r_ineq[active[a]];
  }
  Vector excess = multiply(c, v);
  for (std::size_t i = 0; i < rows; ++i) excess[i] -= rhs[i];
  Vector w;
  try {
    w = solve_spd(gram(c.transposed()), excess);
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
  const double w_scale = 1.0 + norm_inf(w);
  for (std::size_t a = 0; a < active.size(); ++a)
    if (w[me + a] < -1e-13 * w_scale) return std::nullopt;
  Vector x(v.begin(), v.end());
  axpy(-1.0, multiply_transposed(c, w), x);
  const double x_scale = 1.0 + norm_inf(x);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double slack = dot(m.row(i), x) - system_.r_ineq[i];
    if (slack > 1e-12 * (x_scale * std::sqrt(row_norm_sq_[i]) + std::fabs(system_.r_ineq[i]))) return std::nullopt;
  }
  for (std::size_t i = 0; i < me; ++i) {
    const double res = dot(g.row(i), x) - system_.h_eq[i];
    if (std::fabs(res) > 1e-10 * (x_scale * norm2(g.row(i)) + std::fabs(system_.h_eq[i]))) return std::nullopt;
  }
  return x;
}

void PolyhedralProjector::project_affine(std::span<double> x) const {
  const auto& g = system_.g_eq;
  if (g.rows() == 0) return;
  Vector res = multiply(g, x);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= system_.h_eq[i];
  const Vector w = multiply(gram_pinv_, res);
  const Vector step = multiply_transposed(g, w);
  axpy(-1.0, step, x);
}

Vector PolyhedralProjector::project(std::span<const double> v) const {
  if (v.size() != system_.dim()) throw InputError("projection point has the wrong dimension");
  Vector x(v.begin(), v.end());
  const auto& m = system_.m_ineq;
  const std::size_t k = m.rows();
  if (k == 0) {
    project_affine(x);
    return x;
  }

  const std::size_t d = x.size();
  const bool has_affine = system_.g_eq.rows() > 0;
  // Dykstra increments: one per halfspace plus one for the affine block
  std::vector<Vector> incr(k, Vector(d, 0.0));
  Vector affine_incr(d, 0.0);
  Vector prev(d), tmp(d);

  IndexSet active, tried;
  bool attempted = false;
  for (int sweep = 0; sweep < settings_.max_sweeps; ++sweep) {
    if (sweep > 0 && sweep % kActiveCheckEvery == 0) {
      active.clear();
      for (std::size_t i = 0; i < k; ++i)
        if (norm_inf(incr[i]) > 0.0) active.push_back(i);
      if (!attempted || active != tried) {
        attempted = true;
        tried = active;
        if (auto exact = project_on_active(v, active)) return *exact;
      }
    }
    prev = x;
    if (has_affine) {
      for (std::size_t j = 0; j < d; ++j) tmp[j] = x[j] + affine_incr[j];
      x = tmp;
      project_affine(x);
      for (std::size_t j = 0; j < d; ++j) affine_incr[j] = tmp[j] - x[j];
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto row = m.row(i);
      auto& p = incr[i];
      for (std::size_t j = 0; j < d; ++j) tmp[j] = x[j] + p[j];
      const double excess = dot(row, tmp) - system_.r_ineq[i];
      if (excess > 0.0 && row_norm_sq_[i] > 0.0) {
        const double c = excess / row_norm_sq_[i];
        for (std::size_t j = 0; j < d; ++j) {
          x[j] = tmp[j] - c * row[j];
          p[j] = c * row[j];
        }
      } else {
        x = tmp;
        std::fill(p.begin(), p.end(), 0.0);
      }
    }
    if (geomopt::distance(x, prev) < settings_.move_tol) return x;
  }
  throw NumericalError("Dykstra projection did not converge within the sweep cap", system_.residual(x));
}

double PolyhedralProjector::distance(std::span<const double> v) const {
  return geomopt::distance(project(v), v);
}

}  // namespace geomopt
