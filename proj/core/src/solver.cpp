#include "geomopt/solver.hpp"

#include <algorithm>
#include <cmath>

#include "geomopt/analytics.hpp"
#include "geomopt/errors.hpp"
#include "geomopt/linalg.hpp"

namespace geomopt {
namespace {

struct Evaluation {
  double objective;
  Vector gradient;
};

// F(x) and grad f(x) sharing one product with A.
Evaluation evaluate(const CompositeProblem& p, std::span<const double> x) {
  const double g = regularizer_value(p, x);
  if (p.smooth_kind == SmoothKind::quadratic_form) {
    Vector qx = multiply(p.quadratic->q, x);
    const double f = 0.5 * dot(x, qx) - dot(p.quadratic->linear, x);
    for (std::size_t i = 0; i < qx.size(); ++i) qx[i] -= p.quadratic->linear[i];
    return {f + g, std::move(qx)};
  }
  Vector r = multiply(p.a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.y[i];
  const double scale = is_normalized(p) ? 1.0 / static_cast<double>(p.a.rows()) : 1.0;
  const double f = 0.5 * scale * dot(r, r);
  Vector grad = multiply_transposed(p.a, r);
  if (scale != 1.0)
    for (auto& v : grad) v *= scale;
  return {f + g, std::move(grad)};
}

Vector prox_step(const CompositeProblem& p, std::span<const double> x, std::span<const double> grad,
                 double step) {
  Vector v(x.begin(), x.end());
  axpy(-step, grad, v);
  return prox(p, v, step);
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iter < 1) throw InputError("max_iter must be at least 1");
  if (!(gradmap_tol > 0.0)) throw InputError("gradmap_tol must be positive");
  if (record_every < 1) throw InputError("record_every must be at least 1");
  if (const auto* f = std::get_if<FixedStep>(&step_policy); f && !(f->step > 0.0 && std::isfinite(f->step)))
    throw InputError("fixed step must be positive");
}

double step_size(const CompositeProblem& p, const SolverConfig& cfg) {
  if (const auto* f = std::get_if<FixedStep>(&cfg.step_policy)) return f->step;
  const double l = smoothness(p);
  if (!(l > 0.0)) throw DegenerateError("smoothness constant is zero; use a fixed step");
  return 1.0 / l;
}

Trajectory run(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  cfg.validate();
  if (x0.size() != p.dim()) throw InputError("starting point has the wrong dimension");
  if (std::isinf(regularizer_value(p, x0))) throw InputError("starting point is outside the domain of g");

  Trajectory t;
  t.step = step_size(p, cfg);
  Vector x(x0.begin(), x0.end());
  for (std::size_t k = 0;; ++k) {
    auto [obj, grad] = evaluate(p, x);
    if (!std::isfinite(obj)) throw NumericalError("objective became non-finite at iteration " + std::to_string(k));
    Vector xn = prox_step(p, x, grad, t.step);
    const double gm = geomopt::distance(x, xn) / t.step;
    if (!std::isfinite(gm)) throw NumericalError("gradient mapping became non-finite");

    const bool converged = gm <= cfg.gradmap_tol;
    const bool last = converged || k == cfg.max_iter;
    IterateRecord rec;
    rec.k = k;
    rec.objective = obj;
    rec.gradmap_norm = gm;
    rec.active_set = active_set(x, kActiveTol);
    if (last || k % cfg.record_every == 0) rec.x = x;
    t.records.push_back(std::move(rec));
    if (last) {
      t.terminated_by = converged ? Termination::tolerance : Termination::max_iter;
      break;
    }
    x = std::move(xn);
  }
  return t;
}

Trajectory reference_solve(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  SolverConfig ref = cfg;
  ref.gradmap_tol = 1e-12;
  ref.max_iter = cfg.max_iter * 10;
  ref.record_every = std::max<std::size_t>(cfg.record_every, ref.max_iter + 1);
  return run(p, ref, x0);
}

double best_objective(const Trajectory& t) {
  if (t.records.empty()) throw InputError("empty trajectory");
  double best = t.records.front().objective;
  for (const auto& r : t.records) best = std::min(best, r.objective);
  return best;
}

Vector contraction_factors(const Trajectory& t, double f_star) {
  for (const auto& r : t.records)
    if (f_star > r.objective + 1e-12) throw InputError("f_star exceeds a recorded objective");
  Vector out;
  if (t.records.size() < 2) return out;
  out.reserve(t.records.size() - 1);
  for (std::size_t k = 0; k + 1 < t.records.size(); ++k) {
    const double now = std::max(0.0, t.records[k].objective - f_star);
    const double next = std::max(0.0, t.records[k + 1].objective - f_star);
    out.push_back(now == 0.0 ? 0.0 : next / now);
  }
  return out;
}

std::optional<Vector> lasso_face_solution(const CompositeProblem& p, std::span<const double> x) {
  const IndexSet support = active_set(x, kActiveTol);
  if (support.empty()) return std::nullopt;
  const double eta = l1_eta(p);
  const double scale = is_normalized(p) ? static_cast<double>(p.a.rows()) : 1.0;
  const Matrix as = p.a.select_columns(support);
  const Matrix g = gram(as);
  Vector rhs = multiply_transposed(as, p.y);
  for (std::size_t j = 0; j < support.size(); ++j) rhs[j] -= scale * eta * std::copysign(1.0, x[support[j]]);
  Vector beta_s;
  try {
    beta_s = solve_spd(g, rhs);
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
  Vector cand(x.size(), 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (std::copysign(1.0, beta_s[j]) != std::copysign(1.0, x[support[j]]) || beta_s[j] == 0.0)
      return std::nullopt;
    cand[support[j]] = beta_s[j];
  }
  return cand;
}

LassoSolution solve_lasso(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0,
                          std::size_t polish_every) {
  cfg.validate();
  if (!is_l1(p)) throw InputError("solve_lasso needs an l1 problem");
  if (x0.size() != p.dim()) throw InputError("starting point has the wrong dimension");
  const double step = step_size(p, cfg);
  polish_every = std::max<std::size_t>(polish_every, 1);

  LassoSolution out;
  Vector x(x0.begin(), x0.end());
  for (std::size_t k = 0;; ++k) {
    auto [obj, grad] = evaluate(p, x);
    if (!std::isfinite(obj)) throw NumericalError("objective became non-finite at iteration " + std::to_string(k));
    Vector xn = prox_step(p, x, grad, step);
    const double gm = geomopt::distance(x, xn) / step;
    if (gm <= cfg.gradmap_tol || k == cfg.max_iter) {
      out.beta = std::move(x);
      out.iterations = k;
      out.gradmap_norm = gm;
      return out;
    }
    x = std::move(xn);
    if ((k + 1) % polish_every == 0) {
      if (auto cand = lasso_face_solution(p, x)) {
        const double cgm = norm2(gradient_mapping(p, *cand, step));
        if (cgm <= cfg.gradmap_tol) {
          out.beta = std::move(*cand);
          out.iterations = k + 1;
          out.polished = true;
          out.gradmap_norm = cgm;
          return out;
        }
      }
    }
  }
}

LassoSolution lasso_coordinate_descent(const CompositeProblem& p, const SolverConfig& cfg,
                                       std::span<const double> x0, std::size_t polish_every) {
  cfg.validate();
  if (!is_l1(p) || p.smooth_kind == SmoothKind::quadratic_form)
    throw InputError("coordinate descent needs a least-squares l1 problem");
  if (x0.size() != p.dim()) throw InputError("starting point has the wrong dimension");
  const std::size_t n = p.a.rows(), d = p.dim();
  const double scale = is_normalized(p) ? 1.0 / static_cast<double>(n) : 1.0;
  const double eta = l1_eta(p);
  const double step = 1.0 / smoothness(p);
  polish_every = std::max<std::size_t>(polish_every, 1);

  const Matrix at = p.a.transposed();  // rows are columns of A
  Vector col_sq(d);
  for (std::size_t j = 0; j < d; ++j) col_sq[j] = scale * dot(at.row(j), at.row(j));
  Vector x(x0.begin(), x0.end());
  Vector r = multiply(p.a, x);
  for (std::size_t i = 0; i < n; ++i) r[i] = p.y[i] - r[i];

  LassoSolution out;
  auto accept = [&](Vector beta, std::size_t sweeps, bool polished) {
    const double gm = norm2(gradient_mapping(p, beta, step));
    if (gm > cfg.gradmap_tol) return false;
    out.beta = std::move(beta);
    out.iterations = sweeps;
    out.polished = polished;
    out.gradmap_norm = gm;
    return true;
  };

  for (std::size_t sweep = 1; sweep <= cfg.max_iter; ++sweep) {
    for (std::size_t j = 0; j < d; ++j) {
      if (col_sq[j] == 0.0) continue;
      const auto col = at.row(j);
      const double z = scale * dot(col, r) + col_sq[j] * x[j];
      const double mag = std::fabs(z) - eta;
      const double next = mag > 0.0 ? std::copysign(mag, z) / col_sq[j] : 0.0;
      const double delta = next - x[j];
      if (delta != 0.0) {
        axpy(-delta, col, r);
        x[j] = next;
      }
    }
    if (sweep % polish_every == 0 || sweep == cfg.max_iter) {
      if (auto cand = lasso_face_solution(p, x); cand && accept(*cand, sweep, true)) return out;
      if (accept(x, sweep, false)) return out;
    }
  }
  out.beta = std::move(x);
  out.iterations = cfg.max_iter;
  out.gradmap_norm = norm2(gradient_mapping(p, out.beta, step));
  return out;
}

}  // namespace geomopt
