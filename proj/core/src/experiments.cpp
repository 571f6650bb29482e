#include "geomopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "geomopt/errors.hpp"
#include "geomopt/hoffman.hpp"
#include "geomopt/linalg.hpp"
#include "geomopt/matrix_io.hpp"

namespace geomopt {

namespace {

constexpr std::uint64_t kInstanceSalt = 0x9E3779B97F4A7C15ULL;

}  // namespace

SyntheticInstance make_synthetic_lasso(const SyntheticSpec& spec) {
  const auto& e = spec.ensemble;
  if (spec.s < 1 || spec.s > std::min(e.n, e.d)) throw InputError("sparsity must lie in [1, min(n, d)]");
  if (!(spec.noise_sd >= 0.0)) throw InputError("noise level must be nonnegative");
  Matrix a = sample_ensemble(e);
  Rng rng(e.seed ^ kInstanceSalt);

  std::vector<std::size_t> perm(e.d);
  for (std::size_t i = 0; i < e.d; ++i) perm[i] = i;
  for (std::size_t i = 0; i < spec.s; ++i) std::swap(perm[i], perm[i + rng.index(e.d - i)]);
  IndexSet support(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(spec.s));
  std::sort(support.begin(), support.end());

  Vector beta(e.d, 0.0);
  for (auto i : support) beta[i] = rng.rademacher();
  Vector noise = rng.normal_vector(e.n);
  for (auto& v : noise) v *= spec.noise_sd;
  Vector y = multiply(a, beta);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i];

  double eta = spec.eta.value;
  if (spec.eta.kind == EtaPolicy::Kind::dual_condition)
    eta = spec.eta.multiplier * norm_inf(multiply_transposed(a, noise)) / static_cast<double>(e.n);
  if (!(eta > 0.0)) throw InputError("regularization level must be positive");

  SyntheticInstance inst{make_lasso(std::move(a), std::move(y), eta, true), std::move(beta), std::move(support),
                         std::move(noise), eta};
  return inst;
}

HoffmanScalingRow hoffman_scaling_trial(const HoffmanScalingConfig& cfg, std::size_t dim, EnsembleKind kind,
                                        std::size_t trial) {
  SyntheticSpec spec;
  spec.ensemble = EnsembleSpec{kind, cfg.n, dim, kind == EnsembleKind::spiked ? cfg.rho : 0.0,
                               cfg.seed + 1000 * static_cast<std::uint64_t>(trial)};
  spec.s = cfg.s;
  spec.noise_sd = cfg.noise_sd;
  spec.eta = cfg.eta;
  const SyntheticInstance inst = make_synthetic_lasso(spec);
  const auto& p = inst.problem;

  const LassoSolution sol = lasso_coordinate_descent(p, cfg.solver, Vector(dim, 0.0));
  const IndexSet hat = active_set(sol.beta, kActiveTol);

  HoffmanScalingRow row;
  row.dim = dim;
  row.ensemble = to_string(kind);
  row.trial = trial;
  row.identified = sol.gradmap_norm <= cfg.solver.gradmap_tol && hat == inst.support;
  // The restricted constant is taken on the correctly identified active set;
  // rows whose LASSO support differs from it carry identified = 0.
  const auto sv = singular_values(p.a.select_columns(inst.support));
  const double tol = 1e-10 * sv.front();
  double smin = 0.0;
  for (double v : sv)
    if (v > tol) smin = v;
  if (!(smin > 0.0)) throw DegenerateError("support submatrix is zero");
  row.sigma_min_support = smin;
  row.h_support_closed = 1.0 / smin;
  row.l_support = sv.front() * sv.front() / static_cast<double>(cfg.n);
  row.l_global = smoothness(p);
  row.h_global_equality = hoffman_equality(p.a).value;

  const std::size_t face_rows = cfg.n + 2 * dim;  // upper bound on the solution-set system size
  if (face_rows <= kHoffmanSizeCap) {
    try {
      const auto data = lasso_optimality_data(p, sol.beta);
      row.h_face_enumerated = hoffman_enumerated(lasso_optimal_set_system(p, data)).value;
    } catch (const Error&) {
      row.h_face_enumerated.reset();
    }
  }
  return row;
}

std::vector<HoffmanScalingRow> run_hoffman_scaling(const HoffmanScalingConfig& cfg) {
  if (cfg.dims.empty()) throw InputError("dims must be nonempty");
  if (cfg.ensembles.empty()) throw InputError("at least one ensemble is required");
  if (cfg.trials < 1) throw InputError("trials must be at least 1");
  std::vector<std::size_t> dims = cfg.dims;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  if (cfg.s > std::min(cfg.n, dims.front())) throw InputError("s must not exceed n or any dimension");
  std::vector<EnsembleKind> kinds = cfg.ensembles;
  std::sort(kinds.begin(), kinds.end(), [](EnsembleKind a, EnsembleKind b) { return to_string(a) < to_string(b); });
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

  std::vector<HoffmanScalingRow> rows;
  for (auto dim : dims)
    for (auto kind : kinds)
      for (std::size_t t = 0; t < cfg.trials; ++t) rows.push_back(hoffman_scaling_trial(cfg, dim, kind, t));
  return rows;
}

CsvTable hoffman_scaling_table(const std::vector<HoffmanScalingRow>& rows) {
  CsvTable table({"dim", "ensemble", "trial", "H_support_closed", "H_face_enumerated_or_NA", "sigma_min_support",
                  "L_global", "L_support", "identified", "H_global_equality"});
  for (const auto& r : rows)
    table.add_row({std::uint64_t{r.dim}, r.ensemble, std::uint64_t{r.trial}, r.h_support_closed,
                   cell(r.h_face_enumerated), r.sigma_min_support, r.l_global, r.l_support,
                   std::uint64_t{r.identified ? 1U : 0U}, r.h_global_equality});
  return table;
}

CsvTable trajectory_table_header() {
  return CsvTable({"iter", "objective", "gap", "gradmap_norm", "active_size", "jaccard", "cone_ratio", "contraction"});
}

TrajectoryResult run_trajectory(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  TrajectoryResult out;
  out.reference = reference_solve(p, cfg, x0);
  if (out.reference.terminated_by != Termination::tolerance)
    throw NumericalError("reference run did not reach gradient-mapping tolerance 1e-12",
                         out.reference.records.back().gradmap_norm);
  SolverConfig rc = cfg;
  rc.record_every = 1;
  out.run = run(p, rc, x0);
  out.f_star = std::min(best_objective(out.reference), best_objective(out.run));
  out.beta_hat = out.reference.final_x();
  out.support = active_set(out.beta_hat, kActiveTol);
  out.identification = identification_time(out.run, out.support);
  out.contraction = contraction_factors(out.run, out.f_star);
  const bool l1 = is_l1(p);
  if (l1) out.cone = cone_lemma_check(out.run, out.beta_hat, l1_eta(p), out.f_star);

  for (std::size_t k = 0; k < out.run.records.size(); ++k) {
    const auto& r = out.run.records[k];
    CsvCell ratio = std::monostate{};
    if (l1 && !out.support.empty()) ratio = cone_ratio(r.x, out.beta_hat, out.support);
    CsvCell contraction = std::monostate{};
    if (k < out.contraction.size()) contraction = out.contraction[k];
    out.table.add_row({std::uint64_t{r.k}, r.objective, std::max(0.0, r.objective - out.f_star), r.gradmap_norm,
                       std::uint64_t{r.active_set.size()}, jaccard(r.active_set, out.support), ratio, contraction});
  }
  return out;
}

SyntheticTrajectory run_synthetic_trajectory(const TrajectoryConfig& cfg) {
  SyntheticTrajectory out{make_synthetic_lasso(cfg.spec), {}};
  out.result = run_trajectory(out.instance.problem, cfg.solver, Vector(cfg.spec.ensemble.d, 0.0));
  return out;
}

BlobData make_blobs(std::size_t n, double separation, std::uint64_t seed) {
  if (n < 2) throw InputError("at least two points are required");
  Rng rng(seed);
  BlobData out{Matrix(n, 2), Vector(n)};
  const double shift = separation / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double label = i % 2 == 0 ? 1.0 : -1.0;
    out.labels[i] = label;
    out.features(i, 0) = label * shift + rng.normal();
    out.features(i, 1) = label * shift + rng.normal();
  }
  return out;
}

SvmResult run_svm(const CompositeProblem& dual, const SolverConfig& cfg) {
  if (!std::holds_alternative<BoxHyperplaneIndicator>(dual.reg) || dual.smooth_kind != SmoothKind::quadratic_form)
    throw InputError("run_svm expects a dual SVM problem");
  SvmResult out{dual, run_trajectory(dual, cfg, Vector(dual.dim(), 0.0)), {}, {}, {}};
  out.support_vectors = active_set(out.trajectory.beta_hat, kSupportVectorTol);
  if (out.support_vectors.empty()) throw DegenerateError("dual solution has no support vectors");
  out.global = constants_report(dual, GlobalRegion{}, out.trajectory.reference);
  out.restricted = constants_report(dual, SupportFace{out.support_vectors}, out.trajectory.reference);
  return out;
}

CsvTable constants_table(const std::vector<ConstantsReport>& reports) {
  CsvTable table({"restriction", "L", "L_K", "H", "H_method", "H_K", "HK_method", "nu_K", "nu_provenance", "mu_K",
                  "gamma_lb", "delta_star", "kappa", "kappa_K", "B_norm"});
  auto value = [](const std::optional<HoffmanEstimate>& h) { return h ? CsvCell{h->value} : CsvCell{}; };
  auto method = [](const std::optional<HoffmanEstimate>& h) {
    return h ? CsvCell{to_string(h->method)} : CsvCell{};
  };
  for (const auto& r : reports)
    table.add_row({r.restriction, r.L, r.L_K, value(r.H), method(r.H), value(r.H_K), method(r.H_K), r.nu_K,
                   r.nu_provenance, r.mu_K, cell(r.gamma_lb), cell(r.delta_star), r.kappa, r.kappa_K,
                   cell(r.B_norm)});
  return table;
}

SolverConfig solver_config_from(const Config& cfg, const SolverConfig& defaults) {
  SolverConfig s = defaults;
  const std::string policy = cfg.get_string("solver.step_policy", cfg.has("solver.step") ? "fixed" : "global_L");
  if (policy == "global_L") {
    s.step_policy = GlobalL{};
  } else if (policy == "fixed") {
    if (!cfg.has("solver.step")) throw ConfigError("fixed step policy needs 'step'", "solver.step");
    s.step_policy = FixedStep{cfg.get_double("solver.step", 1.0)};
  } else {
    throw ConfigError("step_policy must be global_L or fixed", "solver.step_policy");
  }
  s.max_iter = cfg.get_uint("solver.max_iter", s.max_iter);
  s.gradmap_tol = cfg.get_double("solver.gradmap_tol", s.gradmap_tol);
  s.record_every = cfg.get_uint("solver.record_every", s.record_every);
  try {
    s.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what(), "solver");
  }
  return s;
}

namespace {

Matrix matrix_key(const Config& cfg, const std::string& key) {
  if (!cfg.has(key)) throw ConfigError("missing required key '" + key + "'", key);
  return read_matrix(cfg.get_path(key));
}

Vector vector_key(const Config& cfg, const std::string& key) {
  if (!cfg.has(key)) throw ConfigError("missing required key '" + key + "'", key);
  return read_vector(cfg.get_path(key));
}

EtaPolicy eta_policy_from(const Config& cfg) {
  EtaPolicy e;
  const std::string kind = cfg.get_string("experiment.eta_policy", "dual_condition");
  if (kind == "fixed") {
    e.kind = EtaPolicy::Kind::fixed;
    if (!cfg.has("experiment.eta_value"))
      throw ConfigError("fixed eta policy needs 'eta_value'", "experiment.eta_value");
    e.value = cfg.get_double("experiment.eta_value", 0.0);
    if (!(e.value > 0.0)) throw ConfigError("eta_value must be positive", "experiment.eta_value");
  } else if (kind == "dual_condition") {
    e.kind = EtaPolicy::Kind::dual_condition;
    e.multiplier = cfg.get_double("experiment.eta_multiplier", 2.5);
    if (!(e.multiplier >= 2.0)) throw ConfigError("eta_multiplier must be at least 2", "experiment.eta_multiplier");
  } else {
    throw ConfigError("eta_policy must be fixed or dual_condition", "experiment.eta_policy");
  }
  return e;
}

EnsembleKind ensemble_from(const std::string& name) {
  try {
    return parse_ensemble_kind(name);
  } catch (const InputError& e) {
    throw ConfigError(e.what(), "experiment.ensemble");
  }
}

double rho_from(const Config& cfg, double fallback) {
  const double rho = cfg.get_double("experiment.rho", fallback);
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must lie in [0, 1)", "experiment.rho");
  return rho;
}

}  // namespace

CompositeProblem problem_from(const Config& cfg) {
  SmoothKind kind = SmoothKind::least_squares;
  try {
    kind = parse_smooth_kind(cfg.get_string("problem.smooth_kind", "least_squares"));
  } catch (const InputError& e) {
    throw ConfigError(e.what(), "problem.smooth_kind");
  }
  const std::string default_reg = cfg.has("problem.eta") ? "l1" : cfg.has("problem.labels") ? "box_hyperplane" : "zero";
  const std::string reg_kind = cfg.get_string("problem.reg_kind", default_reg);

  Regularizer reg = ZeroReg{};
  if (reg_kind == "zero") {
  } else if (reg_kind == "l1") {
    if (!cfg.has("problem.eta")) throw ConfigError("l1 regularizer needs 'eta'", "problem.eta");
    reg = L1Reg{cfg.get_double("problem.eta", 1.0)};
  } else if (reg_kind == "polyhedral") {
    PolyhedralSystem sys;
    if (cfg.has("problem.g_eq")) {
      sys.g_eq = matrix_key(cfg, "problem.g_eq");
      sys.h_eq = vector_key(cfg, "problem.h_eq");
    }
    if (cfg.has("problem.m_ineq")) {
      sys.m_ineq = matrix_key(cfg, "problem.m_ineq");
      sys.r_ineq = vector_key(cfg, "problem.r_ineq");
    }
    reg = make_polyhedral_indicator(std::move(sys));
  } else if (reg_kind == "box_hyperplane") {
    reg = BoxHyperplaneIndicator{vector_key(cfg, "problem.labels"), cfg.get_double("problem.c_cap", 1.0)};
  } else {
    throw ConfigError("reg_kind must be zero, l1, polyhedral or box_hyperplane", "problem.reg_kind");
  }

  CompositeProblem p;
  if (kind == SmoothKind::quadratic_form) {
    Matrix q = matrix_key(cfg, "problem.q");
    Vector linear = cfg.has("problem.linear") ? vector_key(cfg, "problem.linear") : Vector(q.rows(), 1.0);
    p = make_quadratic(std::move(q), std::move(linear), reg);
  } else if (reg_kind == "box_hyperplane" && cfg.has("problem.features")) {
    const auto& box = std::get<BoxHyperplaneIndicator>(reg);
    p = make_svm_dual(matrix_key(cfg, "problem.features"), box.labels, box.c_cap);
  } else {
    p.a = matrix_key(cfg, "problem.a");
    p.y = vector_key(cfg, "problem.y");
    p.smooth_kind = kind;
    p.reg = std::move(reg);
  }
  if (cfg.has("problem.alpha")) p.strong_convexity_alpha = cfg.get_double("problem.alpha", 1.0);
  p.validate();
  return p;
}

Vector start_point_from(const Config& cfg, const CompositeProblem& p) {
  if (!cfg.has("problem.x0")) return Vector(p.dim(), 0.0);
  Vector x0 = vector_key(cfg, "problem.x0");
  if (x0.size() != p.dim()) throw ConfigError("x0 has the wrong dimension", "problem.x0");
  return x0;
}

HoffmanScalingConfig hoffman_scaling_config_from(const Config& cfg) {
  HoffmanScalingConfig h;
  h.n = cfg.get_uint("experiment.n", h.n);
  const auto dims = cfg.get_uint_list("experiment.dims", {});
  if (!dims.empty()) h.dims.assign(dims.begin(), dims.end());
  if (cfg.has("experiment.d") && dims.empty()) h.dims = {cfg.get_uint("experiment.d", 0)};
  h.s = cfg.get_uint("experiment.s", h.s);
  if (cfg.has("experiment.ensemble")) {
    h.ensembles.clear();
    for (const auto& name : cfg.get_list("experiment.ensemble", {})) h.ensembles.push_back(ensemble_from(name));
  }
  h.rho = rho_from(cfg, h.rho);
  h.eta = eta_policy_from(cfg);
  h.trials = cfg.get_uint("experiment.trials", h.trials);
  h.seed = cfg.get_uint("experiment.seed", h.seed);
  h.noise_sd = cfg.get_double("experiment.noise", h.noise_sd);
  h.polish_every = cfg.get_uint("experiment.polish_every", h.polish_every);
  h.solver = solver_config_from(cfg, SolverConfig{GlobalL{}, 20000, 1e-9, 1});
  if (h.trials < 1) throw ConfigError("trials must be at least 1", "experiment.trials");
  if (h.n < 1) throw ConfigError("n must be positive", "experiment.n");
  for (auto d : h.dims)
    if (d < 1) throw ConfigError("dims must be positive", "experiment.dims");
  if (h.s < 1 || h.s > h.n || h.s > *std::min_element(h.dims.begin(), h.dims.end()))
    throw ConfigError("s must lie in [1, min(n, dims)]", "experiment.s");
  return h;
}

TrajectoryConfig trajectory_config_from(const Config& cfg) {
  TrajectoryConfig t;
  auto& e = t.spec.ensemble;
  e.n = cfg.get_uint("experiment.n", e.n);
  e.d = cfg.get_uint("experiment.d", e.d);
  e.kind = ensemble_from(cfg.get_string("experiment.ensemble", "gaussian"));
  e.rho = rho_from(cfg, e.kind == EnsembleKind::spiked ? 0.8 : 0.0);
  e.seed = cfg.get_uint("experiment.seed", e.seed);
  t.spec.s = cfg.get_uint("experiment.s", t.spec.s);
  t.spec.noise_sd = cfg.get_double("experiment.noise", t.spec.noise_sd);
  t.spec.eta = eta_policy_from(cfg);
  t.solver = solver_config_from(cfg, t.solver);
  if (e.n < 1 || e.d < 1) throw ConfigError("n and d must be positive", "experiment.n");
  if (t.spec.s < 1 || t.spec.s > std::min(e.n, e.d)) throw ConfigError("s must lie in [1, min(n, d)]", "experiment.s");
  return t;
}

SvmConfig svm_config_from(const Config& cfg) {
  SvmConfig s;
  s.n = cfg.get_uint("experiment.n", s.n);
  s.c_cap = cfg.get_double("problem.c_cap", s.c_cap);
  s.separation = cfg.get_double("experiment.separation", s.separation);
  s.seed = cfg.get_uint("experiment.seed", s.seed);
  s.solver = solver_config_from(cfg, s.solver);
  if (s.n < 2) throw ConfigError("n must be at least 2", "experiment.n");
  if (!(s.c_cap > 0.0)) throw ConfigError("c_cap must be positive", "problem.c_cap");
  return s;
}

}  // namespace geomopt
