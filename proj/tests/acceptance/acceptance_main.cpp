// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "geomopt/analytics.hpp"
#include "geomopt/constants.hpp"
#include "geomopt/errors.hpp"
#include "geomopt/experiments.hpp"
#include "geomopt/hoffman.hpp"
#include "geomopt/linalg.hpp"
#include "geomopt/projection.hpp"
#include "geomopt/solver.hpp"
#include "test_support.hpp"

using namespace geomopt;
using geomopt::oracle::Gen;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome hoffman_scaling() {
  HoffmanScalingConfig cfg;
  cfg.ensembles = {EnsembleKind::gaussian, EnsembleKind::spiked};
  const auto t0 = Clock::now();
  const auto rows = run_hoffman_scaling(cfg);
  const double elapsed = seconds_since(t0);

  std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
  std::size_t identified = 0;
  for (const auto& r : rows) {
    groups[{r.ensemble, r.dim}].push_back(r.h_support_closed);
    identified += r.identified ? 1 : 0;
  }
  std::vector<double> dims, gauss;
  bool ordered = true;
  std::string medians;
  for (auto d : cfg.dims) {
    const double g = oracle::median(groups[{"gaussian", d}]);
    const double s = oracle::median(groups[{"spiked", d}]);
    dims.push_back(static_cast<double>(d));
    gauss.push_back(g);
    ordered = ordered && s > g;
    medians += fmt::format(" d={}:{:.4f}/{:.4f}", d, g, s);
  }
  const double slope = oracle::loglog_slope(dims, gauss);
  Outcome o;
  o.pass = slope >= -0.15 && slope <= 0.15 && ordered && elapsed <= 60.0;
  o.detail = fmt::format("slope={:.4f} in [-0.15,0.15]; spiked>gaussian at every dim={}; median gaussian/spiked{}; "
                         "identified {}/{}; {:.1f}s <= 60s",
                         slope, ordered, medians, identified, rows.size(), elapsed);
  return o;
}

struct TrajectoryFixture {
  SyntheticTrajectory run;
  double seconds = 0.0;
};

const TrajectoryFixture& trajectory_fixture() {
  static const TrajectoryFixture fx = [] {
    const auto t0 = Clock::now();
    TrajectoryFixture f{run_synthetic_trajectory(TrajectoryConfig{}), 0.0};
    f.seconds = seconds_since(t0);
    return f;
  }();
  return fx;
}

Outcome trajectory_containment() {
  const auto& fx = trajectory_fixture();
  const auto& res = fx.run.result;
  const auto& recs = res.run.records;

  bool jaccard_stays = false;
  std::size_t first_one = recs.size();
  for (std::size_t k = 0; k < recs.size(); ++k)
    if (jaccard(recs[k].active_set, res.support) == 1.0) {
      first_one = k;
      break;
    }
  if (first_one < recs.size()) {
    jaccard_stays = true;
    for (std::size_t k = first_one; k < recs.size(); ++k)
      jaccard_stays = jaccard_stays && jaccard(recs[k].active_set, res.support) == 1.0;
  }
  const std::size_t tail = std::min<std::size_t>(50, recs.size());
  double tail_max = 0.0;
  for (std::size_t k = recs.size() - tail; k < recs.size(); ++k)
    tail_max = std::max(tail_max, cone_ratio(recs[k].x, res.beta_hat, res.support));

  Outcome o;
  o.pass = res.identification.has_value() && jaccard_stays && res.cone.violations() == 0 &&
           res.cone.records.size() == recs.size() && tail_max <= 1.0 && fx.seconds <= 30.0;
  o.detail = fmt::format(
      "identification_time={}; jaccard reaches 1 and stays={}; cone-lemma violations={} over {} iterates; "
      "max tail cone ratio={:.3e} <= 1; {:.2f}s <= 30s",
      res.identification ? std::to_string(*res.identification) : "none", jaccard_stays, res.cone.violations(),
      res.cone.records.size(), tail_max, fx.seconds);
  return o;
}

Outcome two_phase_rate() {
  const auto& res = trajectory_fixture().run.result;
  const auto& a = trajectory_fixture().run.instance.problem.a;
  Outcome o;
  if (!res.identification) return {false, "no identification time"};
  const double s_face = smallest_nonzero_singular(a.select_columns(res.support));
  const double s_max = largest_singular(a);
  const double bound = 1.0 - (s_face * s_face) / (s_max * s_max) + 1e-9;
  std::size_t violations = 0, checked = 0;
  double worst = 0.0;
  for (std::size_t k = *res.identification; k < res.contraction.size(); ++k) {
    ++checked;
    worst = std::max(worst, res.contraction[k]);
    if (res.contraction[k] > bound) ++violations;
  }
  o.pass = violations == 0 && checked > 0;
  o.detail = fmt::format("max contraction for k >= {} is {:.6f} <= bound {:.6f}; violations={} of {}",
                         *res.identification, worst, bound, violations, checked);
  return o;
}

Outcome restricted_vs_global() {
  const auto& fx = trajectory_fixture();
  const auto& p = fx.run.instance.problem;
  const auto& ref = fx.run.result.reference;
  const auto global = constants_report(p, GlobalRegion{}, ref);
  const auto face = constants_report(p, SupportFace{fx.run.result.support}, ref);
  const double ratio = global.kappa / face.kappa_K;
  Outcome o;
  o.pass = face.kappa_K < global.kappa && ratio >= 5.0;
  o.detail = fmt::format("kappa={:.4e} ({}), kappa_K={:.4e} ({}), kappa/kappa_K={:.4e} >= 5", global.kappa,
                         global.nu_provenance, face.kappa_K, face.nu_provenance, ratio);
  return o;
}

Outcome eb_pl_consistency() {
  // 2-D LASSO with an invertible design is strongly convex
  const Matrix a = Matrix::from_rows({{2.0, 0.5}, {0.3, 1.0}});
  const CompositeProblem p = make_lasso(a, {1.0, -2.0}, 0.3);
  SolverConfig cfg;
  cfg.max_iter = 100000;
  const auto ref = reference_solve(p, cfg, Vector(2, 0.0));
  if (ref.terminated_by != Termination::tolerance) return {false, "reference solve did not converge"};
  const Vector x_star = ref.final_x();
  const double f_star = best_objective(ref);
  const double l = smoothness(p);
  constexpr std::size_t kSamples = 100000;
  const double nu = measured_pl(p, GlobalRegion{}, kSamples, 11, f_star, x_star);
  const double mu = measured_eb(p, GlobalRegion{}, kSamples, 12, OptimalSetProbe{x_star}, x_star);
  const double eb_bound = eb_from_pl(nu, l);
  const double pl_bound = pl_from_eb(mu, l);
  Outcome o;
  o.pass = mu <= eb_bound + 1e-6 && nu >= pl_bound - 1e-6;
  o.detail = fmt::format("measured_eb={:.6f} <= eb_from_pl={:.6f}; measured_pl={:.6f} >= pl_from_eb={:.6f}; {} samples",
                         mu, eb_bound, nu, pl_bound, kSamples);
  return o;
}

Outcome hoffman_oracle_agreement() {
  const auto t0 = Clock::now();
  double worst_eq = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Gen gen(1000 + seed);
    const std::size_t rows = 1 + gen.index(4), cols = rows + gen.index(4);
    PolyhedralSystem sys;
    sys.g_eq = gen.normal_matrix(rows, cols);
    sys.h_eq = gen.normal_vector(rows);
    sys.m_ineq = Matrix(0, cols);
    const double e = hoffman_enumerated(sys).value;
    const double c = hoffman_equality(sys.g_eq).value;
    worst_eq = std::max(worst_eq, std::fabs(e - c));
  }
  double min_ratio = 1.0;
  std::size_t above = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Gen gen(2000 + seed);
    const std::size_t d = 3 + gen.index(3);
    const std::size_t eq = gen.index(2);
    const std::size_t ineq = 1 + gen.index(d - eq);
    const auto sys = oracle::random_mixed_system(gen, d, eq, ineq);
    const double exact = hoffman_enumerated(sys).value;
    const double sampled = hoffman_sampled(sys, GlobalRegion{}, 100000, seed).value;
    if (sampled > exact + 1e-9) ++above;
    min_ratio = std::min(min_ratio, sampled / exact);
  }
  Outcome o;
  o.pass = worst_eq <= 1e-9 && above == 0 && min_ratio >= 0.5;
  o.detail = fmt::format(
      "equality-only max |enumerated-closed|={:.2e} <= 1e-9 (20 systems); mixed: sampled>enumerated in {} of 20, "
      "min sampled/enumerated={:.4f} >= 0.5 at 1e5 samples; {:.1f}s",
      worst_eq, above, min_ratio, seconds_since(t0));
  return o;
}

Outcome firm_convexity_bounds() {
  std::size_t violations = 0, points = 0;
  double worst_b = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec spec{EnsembleSpec{EnsembleKind::gaussian, 40, 80, 0.0, seed}, 4, 0.1, {}};
    const auto inst = make_synthetic_lasso(spec);
    const auto& p = inst.problem;
    SolverConfig cfg;
    cfg.max_iter = 100000;
    cfg.gradmap_tol = 1e-12;
    const auto sol = solve_lasso(p, cfg, Vector(p.dim(), 0.0));
    const auto data = lasso_optimality_data(p, sol.beta);
    worst_b = std::max(worst_b, largest_singular(lasso_b_matrix(data, p.dim())));

    const double f0 = objective(p, Vector(p.dim(), 0.0));
    const double eta = l1_eta(p);
    const double gamma = firm_convexity_lb_lasso(f0, eta, data.delta_star);
    const double box = f0 / eta;  // Theta = { ||beta||_inf <= F(beta0) / eta }

    // Dual vector recomputed from the residual; +-eta on the tight coordinates.
    const Vector resid = subtract(p.y, multiply(p.a, sol.beta));
    Vector s = multiply_transposed(p.a, resid);
    for (auto& v : s) v /= static_cast<double>(p.a.rows());
    for (auto i : data.iplus) s[i] = eta;
    for (auto i : data.iminus) s[i] = -eta;
    std::vector<int> kind(p.dim(), 0);
    for (auto i : data.iplus) kind[i] = 1;
    for (auto i : data.iminus) kind[i] = -1;

    Gen gen(500 + seed);
    for (int t = 0; t < 10000; ++t) {
      double tilt = 0.0, dist_sq = 0.0;
      for (std::size_t i = 0; i < p.dim(); ++i) {
        const double b = gen.uniform(-box, box);
        tilt += eta * std::fabs(b) - s[i] * b;
        double di = 0.0;
        if (kind[i] == 0) di = b;
        if (kind[i] == 1) di = std::min(b, 0.0);
        if (kind[i] == -1) di = std::max(b, 0.0);
        dist_sq += di * di;
      }
      ++points;
      if (tilt < 0.5 * gamma * dist_sq - 1e-12 * (1.0 + tilt)) ++violations;
    }
  }
  bool raised = false;
  try {
    pl_from_qg(4.0, 1.0);
  } catch (const PreconditionError&) {
    raised = true;
  }
  Outcome o;
  o.pass = violations == 0 && worst_b <= std::sqrt(2.0) + 1e-12 && raised;
  o.detail = fmt::format(
      "firm-convexity inequality violations={} over {} points in Theta (5 instances); max ||B||={:.6f} <= sqrt 2; "
      "pl_from_qg(L < gamma/2) raises={}",
      violations, points, worst_b, raised);
  return o;
}

Outcome property_suites() {
  Gen gen(77);
  const Matrix a = gen.normal_matrix(15, 8);
  const CompositeProblem lasso = make_lasso(a, gen.normal_vector(15), 0.4);
  const double l = smoothness(lasso);

  std::size_t mono_viol = 0, gm_viol = 0;
  for (int t = 0; t < 10000; ++t) {
    const Vector x = scaled(gen.normal_vector(8), gen.uniform(0.1, 3.0));
    double a1 = l * std::exp(gen.uniform(-4.0, 3.0));
    double a2 = l * std::exp(gen.uniform(-4.0, 3.0));
    if (a1 > a2) std::swap(a1, a2);
    // 1e-12 is taken relative to the magnitude: D_g reaches ~1e4 here, where one ulp exceeds 1e-12
    const double d1 = generalized_gradient_size(lasso, x, a1), d2 = generalized_gradient_size(lasso, x, a2);
    if (d1 > d2 + 1e-12 * std::max(1.0, d2)) ++mono_viol;
    const double gm = norm2(gradient_mapping(lasso, x, 1.0 / l));
    const double dg = generalized_gradient_size(lasso, x, l);
    if (gm * gm > dg + 1e-12 * (1.0 + dg)) ++gm_viol;
  }

  // Descent for step <= 1/L on each regularizer kind
  std::vector<CompositeProblem> problems;
  problems.push_back(make_least_squares(a, gen.normal_vector(15)));
  problems.push_back(lasso);
  problems.push_back(make_lasso(a, gen.normal_vector(15), 0.05, true));
  {
    PolyhedralSystem set;
    set.g_eq = Matrix(1, 8, 1.0);
    set.h_eq = {1.0};
    set.m_ineq = -1.0 * Matrix::identity(8);
    set.r_ineq = Vector(8, 0.0);
    CompositeProblem simplex = make_least_squares(a, gen.normal_vector(15));
    simplex.reg = make_polyhedral_indicator(set);
    problems.push_back(simplex);
  }
  {
    const auto blobs = make_blobs(12, 2.0, 3);
    problems.push_back(make_svm_dual(blobs.features, blobs.labels, 1.0));
  }
  std::size_t descent_viol = 0, steps = 0;
  for (const auto& p : problems) {
    Vector x0(p.dim(), 0.0);
    if (std::holds_alternative<PolyhedralIndicator>(p.reg)) x0 = Vector(p.dim(), 1.0 / static_cast<double>(p.dim()));
    for (double frac : {1.0, 0.5}) {
      SolverConfig cfg;
      cfg.step_policy = FixedStep{frac / smoothness(p)};
      cfg.max_iter = 300;
      cfg.gradmap_tol = 1e-14;
      const auto traj = run(p, cfg, x0);
      for (std::size_t k = 0; k + 1 < traj.records.size(); ++k) {
        ++steps;
        const double fk = traj.records[k].objective;
        if (traj.records[k + 1].objective > fk + 1e-12 * std::max(1.0, std::fabs(fk))) ++descent_viol;
      }
    }
  }

  // Prox invariants
  std::size_t prox_viol = 0;
  const CompositeProblem box = make_svm_dual(make_blobs(10, 2.0, 5).features, make_blobs(10, 2.0, 5).labels, 0.7);
  const auto& labels = std::get<BoxHyperplaneIndicator>(box.reg).labels;
  const auto& simplex = problems[3];
  for (int t = 0; t < 2000; ++t) {
    const double lam = gen.uniform(0.1, 2.0);
    const Vector v1 = scaled(gen.normal_vector(8), 2.0), v2 = scaled(gen.normal_vector(8), 2.0);
    // soft-threshold optimality
    const Vector u = prox(lasso, v1, lam);
    const double thr = lam * 0.4;
    for (std::size_t i = 0; i < 8; ++i) {
      const double r = v1[i] - u[i];
      if (u[i] != 0.0 ? std::fabs(r - std::copysign(thr, u[i])) > 1e-10 : std::fabs(r) > thr + 1e-10) ++prox_viol;
    }
    for (const CompositeProblem* p : {&lasso, &simplex}) {
      const Vector p1 = prox(*p, v1, lam), p2 = prox(*p, v2, lam);
      if (distance(p1, p2) > distance(v1, v2) + 1e-9) ++prox_viol;
    }
    // projections are idempotent; soft thresholding is not
    const Vector s1 = prox(simplex, v1, lam);
    if (distance(prox(simplex, s1, lam), s1) > 1e-9) ++prox_viol;
    const Vector w1 = scaled(gen.normal_vector(10), 2.0), w2 = scaled(gen.normal_vector(10), 2.0);
    const Vector b1 = prox(box, w1, lam), b2 = prox(box, w2, lam);
    if (std::fabs(dot(labels, b1)) > 1e-10) ++prox_viol;
    for (double x : b1)
      if (x < -1e-10 || x > 0.7 + 1e-10) ++prox_viol;
    if (distance(prox(box, b1, lam), b1) > 1e-9) ++prox_viol;
    if (distance(b1, b2) > distance(w1, w2) + 1e-9) ++prox_viol;
  }
  Outcome o;
  o.pass = mono_viol == 0 && descent_viol == 0 && gm_viol == 0 && prox_viol == 0;
  o.detail = fmt::format(
      "D_g monotonicity violations={} (1e4 samples); descent violations={} over {} steps; "
      "||G||^2 > D_g violations={} (1e4 samples); prox invariant violations={}",
      mono_viol, descent_viol, steps, gm_viol, prox_viol);
  return o;
}

Outcome svm_dual() {
  const SvmConfig cfg;
  const auto blobs = make_blobs(cfg.n, cfg.separation, cfg.seed);
  const auto dual = make_svm_dual(blobs.features, blobs.labels, cfg.c_cap);
  const auto res = run_svm(dual, cfg.solver);
  double worst_feas = 0.0;
  for (const auto& r : res.trajectory.run.records) {
    worst_feas = std::max(worst_feas, std::fabs(dot(blobs.labels, r.x)));
    for (double x : r.x) worst_feas = std::max({worst_feas, -x, x - cfg.c_cap});
  }
  const double dual_min = res.trajectory.run.final_objective();
  const double primal = oracle::svm_primal_grid(blobs.features, blobs.labels, cfg.c_cap);
  const double gap = std::fabs(-dual_min - primal);
  Outcome o;
  o.pass = worst_feas <= 1e-9 && gap <= 1e-4 && res.restricted.kappa_K <= res.global.kappa;
  o.detail = fmt::format(
      "max infeasibility over {} iterates={:.2e} <= 1e-9; |dual - grid primal|={:.2e} <= 1e-4; "
      "kappa_K={:.4e} <= kappa={:.4e}; {} support vectors",
      res.trajectory.run.records.size(), worst_feas, gap, res.restricted.kappa_K, res.global.kappa,
      res.support_vectors.size());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"hoffman-scaling", hoffman_scaling},
      {"trajectory-containment", trajectory_containment},
      {"two-phase-rate", two_phase_rate},
      {"restricted-vs-global-conditioning", restricted_vs_global},
      {"eb-pl-equivalence-consistency", eb_pl_consistency},
      {"hoffman-oracle-agreement", hoffman_oracle_agreement},
      {"firm-convexity-bounds", firm_convexity_bounds},
      {"property-suites", property_suites},
      {"svm-dual", svm_dual},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
