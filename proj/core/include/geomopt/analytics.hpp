#pragma once

#include <optional>

#include "geomopt/matrix.hpp"
#include "geomopt/problem.hpp"

namespace geomopt {

struct Trajectory;

/// { i : |x_i| > tol }
IndexSet active_set(std::span<const double> x, double tol);

/// |a n b| / |a u b|, with 1 when both sets are empty.
double jaccard(const IndexSet& a, const IndexSet& b);

/// ||D off support||_1 / ||D on support||_1 for D = x - beta_hat; +inf when
/// only the denominator vanishes and 0 when both do. Throws InputError on an
/// empty support.
double cone_ratio(std::span<const double> x, std::span<const double> beta_hat, const IndexSet& support);

struct ConeRecord {
  std::size_t k = 0;
  double cone_ratio = 0.0;
  double off_support_l1 = 0.0;
  double lemma_rhs = 0.0;
  bool lemma_holds = true;
};

struct ConeMetrics {
  std::vector<ConeRecord> records;
  std::size_t violations() const;
};

/// Checks ||D_{S^c}||_1 <= 3 ||D_S||_1 + 2 (F_k - f_hat) / eta at every
/// recorded iterate that stores x, where S is the support of beta_hat.
ConeMetrics cone_lemma_check(const Trajectory& traj, std::span<const double> beta_hat, double eta, double f_hat);

/// Smallest T such that every record with k >= T has the reference active set.
std::optional<std::size_t> identification_time(const Trajectory& traj, const IndexSet& reference_support);

struct LassoOptimalityData {
  Vector beta_hat;
  Vector s_hat;  // -grad f(beta_hat), so s = A^T (y - A beta) in the unnormalized case
  IndexSet i0;
  IndexSet iplus;
  IndexSet iminus;
  double delta_star = 0.0;  // +inf when i0 is empty
  double eta = 0.0;
};

/// Classifies coordinates of a LASSO solution by the dual vector. Throws
/// NotOptimalError when the KKT residual exceeds kkt_tol and
/// ClassificationError for a coordinate neither tight nor strictly inside.
LassoOptimalityData lasso_optimality_data(const CompositeProblem& p, std::span<const double> beta_hat,
                                          double kkt_tol = 1e-7);

/// Distance from grad f(x) to -eta d||x||_1, coordinatewise.
double lasso_kkt_residual(const CompositeProblem& p, std::span<const double> x);

/// Rows +-e_i for i0, -e_i for iplus, e_i for iminus.
Matrix lasso_b_matrix(const LassoOptimalityData& data, std::size_t dim);

/// { beta : A beta = A beta_hat, B beta <= 0 }, the LASSO solution set.
PolyhedralSystem lasso_optimal_set_system(const CompositeProblem& p, const LassoOptimalityData& data);

}  // namespace geomopt
