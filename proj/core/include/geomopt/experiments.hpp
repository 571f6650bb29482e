#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geomopt/analytics.hpp"
#include "geomopt/config.hpp"
#include "geomopt/constants.hpp"
#include "geomopt/csv.hpp"
#include "geomopt/problem.hpp"
#include "geomopt/random.hpp"
#include "geomopt/solver.hpp"

namespace geomopt {

struct EtaPolicy {
  enum class Kind { fixed, dual_condition };
  Kind kind = Kind::dual_condition;
  double value = 0.0;
  double multiplier = 2.5;
};

/// Planted s-sparse LASSO: beta* has +-1 entries on s random coordinates,
/// y = A beta* + noise_sd * eps, normalized least squares. The dual-condition
/// policy sets eta = multiplier * ||grad f(beta*)||_inf = multiplier * ||A^T eps'||_inf / n
/// where eps' = noise_sd * eps.
struct SyntheticSpec {
  EnsembleSpec ensemble;
  std::size_t s = 5;
  double noise_sd = 0.1;
  EtaPolicy eta;
};

struct SyntheticInstance {
  CompositeProblem problem;
  Vector beta_star;
  IndexSet support;
  Vector noise;
  double eta = 0.0;
};

SyntheticInstance make_synthetic_lasso(const SyntheticSpec& spec);

struct HoffmanScalingConfig {
  std::size_t n = 50;
  std::vector<std::size_t> dims{100, 200, 400, 800};
  std::size_t s = 5;
  std::vector<EnsembleKind> ensembles{EnsembleKind::gaussian};
  double rho = 0.8;
  EtaPolicy eta;
  std::size_t trials = 10;
  std::uint64_t seed = 7;
  double noise_sd = 0.1;
  SolverConfig solver;
  std::size_t polish_every = 50;
};

struct HoffmanScalingRow {
  std::size_t dim = 0;
  std::string ensemble;
  std::size_t trial = 0;
  double h_support_closed = 0.0;
  std::optional<double> h_face_enumerated;
  double sigma_min_support = 0.0;
  double l_global = 0.0;
  double l_support = 0.0;
  bool identified = false;
  double h_global_equality = 0.0;  // 1 / sigma_min^+(A)
};

/// One trial; the design seed is seed + 1000 * trial.
HoffmanScalingRow hoffman_scaling_trial(const HoffmanScalingConfig& cfg, std::size_t dim, EnsembleKind kind,
                                        std::size_t trial);
/// Rows in (dim, ensemble name, trial) order.
std::vector<HoffmanScalingRow> run_hoffman_scaling(const HoffmanScalingConfig& cfg);
CsvTable hoffman_scaling_table(const std::vector<HoffmanScalingRow>& rows);

/// Trajectory CSV columns.
CsvTable trajectory_table_header();

struct TrajectoryResult {
  Trajectory run;
  Trajectory reference;
  double f_star = 0.0;
  Vector beta_hat;
  IndexSet support;
  std::optional<std::size_t> identification;
  ConeMetrics cone;
  Vector contraction;
  CsvTable table = trajectory_table_header();
};

/// Reference solve (tolerance 1e-12) followed by the instrumented run from
/// x0 with every iterate stored. Throws NumericalError when the reference
/// does not converge. Cone columns are NA for non-l1 problems.
TrajectoryResult run_trajectory(const CompositeProblem& p, const SolverConfig& cfg, std::span<const double> x0);

struct TrajectoryConfig {
  SyntheticSpec spec{EnsembleSpec{EnsembleKind::gaussian, 100, 200, 0.0, 7}, 5, 0.1, {}};
  SolverConfig solver{GlobalL{}, 10000, 1e-7, 1};
};

struct SyntheticTrajectory {
  SyntheticInstance instance;
  TrajectoryResult result;
};

SyntheticTrajectory run_synthetic_trajectory(const TrajectoryConfig& cfg);

struct BlobData {
  Matrix features;
  Vector labels;
};

/// n points in the plane, alternating labels +1/-1, centered at
/// +-(separation/2, separation/2) with unit variance.
BlobData make_blobs(std::size_t n, double separation, std::uint64_t seed);

struct SvmConfig {
  std::size_t n = 40;
  double c_cap = 1.0;
  double separation = 3.0;
  std::uint64_t seed = 7;
  SolverConfig solver{GlobalL{}, 20000, 1e-9, 1};
};

struct SvmResult {
  CompositeProblem problem;
  TrajectoryResult trajectory;
  IndexSet support_vectors;
  ConstantsReport global;
  ConstantsReport restricted;
};

constexpr double kSupportVectorTol = 1e-8;

SvmResult run_svm(const CompositeProblem& dual, const SolverConfig& cfg);
CsvTable constants_table(const std::vector<ConstantsReport>& reports);

// Config-driven entry points used by the command-line tool.

SolverConfig solver_config_from(const Config& cfg, const SolverConfig& defaults);
/// Problem described by the [problem] section.
CompositeProblem problem_from(const Config& cfg);
Vector start_point_from(const Config& cfg, const CompositeProblem& p);
HoffmanScalingConfig hoffman_scaling_config_from(const Config& cfg);
TrajectoryConfig trajectory_config_from(const Config& cfg);
SvmConfig svm_config_from(const Config& cfg);

}  // namespace geomopt
