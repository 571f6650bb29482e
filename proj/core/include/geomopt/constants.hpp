#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "geomopt/hoffman.hpp"
#include "geomopt/problem.hpp"
#include "geomopt/sampling.hpp"
#include "geomopt/solver.hpp"

namespace geomopt {

/// alpha / h_k^2
double pl_from_hoffman_indicator(double alpha, double h_k);
/// 1/l + 2/nu
double eb_from_pl(double nu, double l);
/// l / (1 + 4 l^2 mu^2)
double pl_from_eb(double mu, double l);
/// 1/l + (8/alpha) h^2 (1 + b l / gamma)^2 + 8 h b / gamma
double eb_polyhedral_nonsmooth(double l, double alpha, double h_k, double b_norm, double gamma_k);
/// gamma/2; throws PreconditionError when l < gamma/2.
double pl_from_qg(double gamma_k, double l);
/// 2 / max(F0 / (eta delta), F0 / (2 eta^2)); an infinite delta drops the first term.
double firm_convexity_lb_lasso(double f_beta0, double eta, double delta_star);

/// inf of D_g(x, L) / (2 (F(x) - f_star)) over sampled x with finite g and
/// F(x) > f_star + 1e-10. Throws InsufficientSamplingError when no sample qualifies.
double measured_pl(const CompositeProblem& p, const Restriction& restriction, std::size_t n_samples,
                   std::uint64_t seed, double f_star, std::span<const double> center);

/// A single optimal point or a polyhedral description of the optimal set.
using OptimalSetProbe = std::variant<Vector, PolyhedralSystem>;

/// sup of dist(x, X*) / ||G_{1/L}(x)|| over sampled x with finite g,
/// skipping ||G|| <= 1e-12.
double measured_eb(const CompositeProblem& p, const Restriction& restriction, std::size_t n_samples,
                   std::uint64_t seed, const OptimalSetProbe& probe, std::span<const double> center);

struct ConstantsOptions {
  std::size_t pl_samples = 2000;
  std::size_t hoffman_samples = 200;
  std::uint64_t seed = 0;
  double kkt_tol = 1e-7;
};

/// Fields that do not apply to the problem are empty.
struct ConstantsReport {
  std::string restriction;
  double L = 0.0;
  double L_K = 0.0;
  std::optional<HoffmanEstimate> H;
  std::optional<HoffmanEstimate> H_K;
  double nu = 0.0;
  double nu_K = 0.0;
  std::string nu_provenance;
  double mu_K = 0.0;
  std::optional<double> gamma_lb;
  std::optional<double> delta_star;
  double kappa = 0.0;
  double kappa_K = 0.0;
  std::optional<double> B_norm;
};

/// Assembles global and restricted constants around the reference solution.
///
/// nu_K follows the first applicable route: "strong_convexity_hoffman" when A
/// is injective on the restriction (alpha / H_K^2 with the closed-form H_K),
/// "indicator_hoffman" for the SVM dual (H_K from the Q-submatrix),
/// "polyhedral_eb" for l1 problems otherwise, and "measured" as the fallback.
ConstantsReport constants_report(const CompositeProblem& p, const Restriction& restriction,
                                 const Trajectory& reference, const ConstantsOptions& options = {});

}  // namespace geomopt
