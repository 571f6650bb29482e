#pragma once

#include <optional>
#include <variant>

#include "geomopt/matrix.hpp"
#include "geomopt/problem.hpp"

namespace geomopt {

struct GlobalL {};
struct FixedStep {
  double step = 1.0;
};
using StepPolicy = std::variant<GlobalL, FixedStep>;

struct SolverConfig {
  StepPolicy step_policy = GlobalL{};
  std::size_t max_iter = 10000;
  double gradmap_tol = 1e-9;
  std::size_t record_every = 1;

  void validate() const;
};

struct IterateRecord {
  std::size_t k = 0;
  Vector x;  // empty unless k is a multiple of record_every or the final iterate
  double objective = 0.0;
  double gradmap_norm = 0.0;
  IndexSet active_set;
};

enum class Termination { tolerance, max_iter };

struct Trajectory {
  std::vector<IterateRecord> records;
  Termination terminated_by = Termination::max_iter;
  double step = 0.0;

  const Vector& final_x() const { return records.back().x; }
  double final_objective() const { return records.back().objective; }
};

constexpr double kActiveTol = 1e-10;

double step_size(const CompositeProblem& p, const SolverConfig& cfg);

/// Proximal gradient method x+ = prox(x - step grad f(x), step). Stops once
/// ||G_step(x_k)|| <= gradmap_tol or k = max_iter. Throws InputError when g(x0)
/// is infinite and NumericalError on a non-finite objective.
Trajectory run(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0);

/// Long run used for F*: tolerance 1e-12 and ten times the iteration budget.
Trajectory reference_solve(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0);

/// Smallest recorded objective.
double best_objective(const Trajectory& t);

/// (F_{k+1} - F*) / (F_k - F*) with 0/0 = 0. Throws InputError when f_star
/// exceeds a recorded objective by more than 1e-12.
Vector contraction_factors(const Trajectory& t, double f_star);

struct LassoSolution {
  Vector beta;
  std::size_t iterations = 0;
  bool polished = false;
  double gradmap_norm = 0.0;
};

/// Stationary point of the smooth part plus eta <sign(x), beta> on the signed
/// support of x, or nothing when the face system is singular or the solution
/// changes a sign.
std::optional<Vector> lasso_face_solution(const CompositeProblem& p, std::span<const double> x);

/// LASSO minimizer for experiment pipelines. Runs the proximal gradient method
/// and, every `polish_every` steps, solves the stationarity equations on the
/// current signed support; the candidate is accepted when its gradient mapping
/// is below `cfg.gradmap_tol`.
LassoSolution solve_lasso(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0,
                          std::size_t polish_every = 50);

/// Cyclic coordinate descent for least-squares LASSO problems with the same
/// face polish, checked every `polish_every` sweeps. Used where the proximal
/// gradient method is too slow for ill-conditioned designs; max_iter counts
/// sweeps and the result satisfies ||G_{1/L}|| <= gradmap_tol on success.
LassoSolution lasso_coordinate_descent(const CompositeProblem& p, const SolverConfig& cfg,
                                       std::span<const double> x0, std::size_t polish_every = 5);

}  // namespace geomopt
