#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "geomopt/analytics.hpp"
#include "geomopt/constants.hpp"
#include "geomopt/errors.hpp"
#include "geomopt/experiments.hpp"
#include "test_support.hpp"

using namespace geomopt;

namespace {

Trajectory converged(const CompositeProblem& p, std::size_t dim) {
  SolverConfig cfg;
  cfg.gradmap_tol = 1e-12;
  cfg.max_iter = 200000;
  cfg.record_every = 1000;
  return run(p, cfg, Vector(dim, 0.0));
}

}  // namespace

TEST(Conversions, SubstitutionExamples) {
  EXPECT_DOUBLE_EQ(pl_from_hoffman_indicator(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(pl_from_hoffman_indicator(2.0, 4.0), 0.125);
  EXPECT_DOUBLE_EQ(eb_from_pl(1.0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(eb_from_pl(0.5, 2.0), 4.5);
  EXPECT_DOUBLE_EQ(pl_from_eb(1.0, 1.0), 0.2);
  EXPECT_DOUBLE_EQ(eb_polyhedral_nonsmooth(1, 1, 1, 0, 1), 9.0);
  const double r = std::sqrt(2.0) / 2;
  EXPECT_NEAR(eb_polyhedral_nonsmooth(1, 1, 1, std::sqrt(2.0), 2), 1 + 8 * (1 + r) * (1 + r) + 8 * r, 1e-12);
  EXPECT_NEAR(eb_polyhedral_nonsmooth(1, 1, 1, std::sqrt(2.0), 2), 29.9706, 1e-4);
  EXPECT_DOUBLE_EQ(pl_from_qg(2.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(pl_from_qg(0.5, 1.0), 0.25);
  EXPECT_THROW(pl_from_qg(4.0, 1.0), PreconditionError);
  EXPECT_DOUBLE_EQ(firm_convexity_lb_lasso(1.0, 1.0, 0.5), 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(firm_convexity_lb_lasso(2.0, 0.5, inf), 4 * 0.25 / 2.0);
}

TEST(Conversions, RoundTripNeverGains) {
  oracle::Gen gen(1);
  for (int t = 0; t < 2000; ++t) {
    const double nu = std::exp(gen.uniform(-6, 6)), l = std::exp(gen.uniform(-6, 6));
    EXPECT_LE(pl_from_eb(eb_from_pl(nu, l), l), nu * (1 + 1e-12));
  }
}

TEST(Conversions, StrictlyDecreasingInTheFirstArgument) {
  for (double l : {0.1, 1.0, 7.0}) {
    double prev_eb = std::numeric_limits<double>::infinity(), prev_pl = prev_eb;
    for (int i = 1; i <= 200; ++i) {
      const double x = 0.01 * i * i;
      const double eb = eb_from_pl(x, l), pl = pl_from_eb(x, l);
      EXPECT_LT(eb, prev_eb);
      EXPECT_LT(pl, prev_pl);
      prev_eb = eb;
      prev_pl = pl;
    }
  }
}

TEST(MeasuredPl, LeastSquaresIsAtLeastTheSmallestEigenvalue) {
  oracle::Gen gen(2);
  const Matrix a = gen.normal_matrix(6, 3);
  const auto p = make_least_squares(a, gen.normal_vector(6));
  const Trajectory ref = converged(p, 3);
  const Vector ev = oracle::brute_force_eigenvalues(oracle::naive_gram(a));
  const double lmin = *std::min_element(ev.begin(), ev.end());
  const double est = measured_pl(p, GlobalRegion{}, 5000, 3, ref.final_objective(), ref.final_x());
  EXPECT_GE(est, lmin - 1e-9);
}

TEST(MeasuredPl, OneDimensionalQuadraticIsExact) {
  const double mu = 2.5;
  const auto p = make_quadratic(Matrix::from_rows({{mu}}), {1.0}, ZeroReg{});
  const double f_star = -0.5 / mu;
  EXPECT_NEAR(measured_pl(p, GlobalRegion{}, 500, 4, f_star, Vector{1.0 / mu}), mu, 1e-9);
}

TEST(MeasuredPl, BoxConstrainedQuadraticRespectsTheIndicatorBound) {
  PolyhedralSystem box;
  box.m_ineq = Matrix::from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  box.r_ineq = {1, 1, 1, 1};
  const Matrix q = Matrix::from_rows({{2.0, 0.5}, {0.5, 1.0}});
  const auto p = make_quadratic(q, {4.0, -3.0}, make_polyhedral_indicator(box));
  const Trajectory ref = converged(p, 2);
  const Vector ev = oracle::brute_force_eigenvalues(q);
  const double alpha = *std::min_element(ev.begin(), ev.end());
  const double h = hoffman_enumerated(box).value;
  EXPECT_NEAR(h, 1.0, 1e-12);
  const double est = measured_pl(p, SampledRegion{SampledRegion::Shape::box, {0.0, 0.0}, 1.0}, 100000, 5,
                                 ref.final_objective(), ref.final_x());
  EXPECT_GE(est, pl_from_hoffman_indicator(alpha, h) - 1e-6);
}

TEST(MeasuredPl, QuadraticGrowthGivesHalfTheGrowthConstant) {
  // f = x0^2 - 2 x0 is minimized on the line x0 = 1 with growth constant 2
  const auto p = make_quadratic(Matrix::diagonal(Vector{2.0, 0.0}), {2.0, 0.0}, ZeroReg{});
  const double est = measured_pl(p, GlobalRegion{}, 20000, 6, -1.0, Vector{1.0, 0.0});
  EXPECT_GE(est, pl_from_qg(2.0, smoothness(p)) - 1e-9);
  EXPECT_THROW(measured_pl(p, GlobalRegion{}, 10, 6, 1e6, Vector{1.0, 0.0}), InsufficientSamplingError);
}

TEST(MeasuredEb, OneDimensionalUnitQuadraticIsOne) {
  const auto p = make_quadratic(Matrix::from_rows({{1.0}}), {3.0}, ZeroReg{});
  EXPECT_NEAR(measured_eb(p, GlobalRegion{}, 500, 7, Vector{3.0}, Vector{3.0}), 1.0, 1e-12);
}

TEST(MeasuredEb, BoundedByTheConvertedPlConstant) {
  oracle::Gen gen(8);
  for (int t = 0; t < 3; ++t) {
    const Matrix a = gen.normal_matrix(4, 2);
    const auto p = make_lasso(a, gen.normal_vector(4), 0.3);
    const Trajectory ref = converged(p, 2);
    const double l = smoothness(p);
    const double pl = measured_pl(p, GlobalRegion{}, 20000, 9, ref.final_objective(), ref.final_x());
    const double eb = measured_eb(p, GlobalRegion{}, 20000, 9, ref.final_x(), ref.final_x());
    EXPECT_TRUE(std::isfinite(eb));
    EXPECT_LE(eb, eb_from_pl(pl, l) + 1e-6);
    EXPECT_GE(pl, pl_from_eb(eb, l) - 1e-6);
  }
}

TEST(ConstantsReport, ToyLassoOnItsSupportFace) {
  const auto p = make_lasso(Matrix::identity(2), {3.0, 0.5}, 1.0);
  const Trajectory ref = converged(p, 2);
  const auto rep = constants_report(p, SupportFace{{0}}, ref);
  EXPECT_EQ(rep.restriction, "support_face");
  EXPECT_NEAR(rep.L, 1.0, 1e-12);
  EXPECT_NEAR(rep.L_K, 1.0, 1e-12);
  ASSERT_TRUE(rep.H_K.has_value());
  EXPECT_NEAR(rep.H_K->value, 1.0, 1e-12);
  ASSERT_TRUE(rep.delta_star.has_value());
  EXPECT_NEAR(*rep.delta_star, 0.5, 1e-9);
  EXPECT_EQ(rep.kappa_K, rep.L_K / rep.nu_K);
  EXPECT_EQ(rep.kappa, rep.L / rep.nu);
  ASSERT_TRUE(rep.B_norm.has_value());
  EXPECT_LE(*rep.B_norm, std::sqrt(2.0) + 1e-12);
}

TEST(ConstantsReport, RestrictedConditionNumberIsSmallerOnAWideLasso) {
  oracle::Gen gen(10);
  const Matrix a = gen.normal_matrix(50, 200);
  const auto p = make_lasso(a, gen.normal_vector(50), 0.3, true);
  SolverConfig cfg;
  cfg.gradmap_tol = 1e-11;
  cfg.max_iter = 100000;
  const Vector beta = lasso_coordinate_descent(p, cfg, Vector(200, 0.0)).beta;
  const Trajectory ref = converged(p, 200);
  const IndexSet support = active_set(ref.final_x(), kActiveTol);
  ASSERT_EQ(support, active_set(beta, kActiveTol));
  ConstantsOptions opt;
  opt.hoffman_samples = 50;
  const auto global = constants_report(p, GlobalRegion{}, ref, opt);
  const auto face = constants_report(p, SupportFace{support}, ref, opt);
  EXPECT_LT(face.kappa_K, global.kappa);
  EXPECT_LE(*face.B_norm, std::sqrt(2.0) + 1e-12);
}

TEST(ConstantsReport, SvmDualCompletesOnTheSupportVectors) {
  const BlobData blobs = make_blobs(16, 3.0, 11);
  const auto dual = make_svm_dual(blobs.features, blobs.labels, 1.0);
  const SvmResult res = run_svm(dual, SolverConfig{GlobalL{}, 20000, 1e-9, 1});
  ASSERT_FALSE(res.support_vectors.empty());
  EXPECT_EQ(res.restricted.restriction, "support_face");
  EXPECT_EQ(res.restricted.nu_provenance, "indicator_hoffman");
  EXPECT_TRUE(std::isfinite(res.restricted.kappa_K));
  EXPECT_EQ(res.restricted.kappa_K, res.restricted.L_K / res.restricted.nu_K);
}

TEST(ConstantsReport, RejectsUnconvergedReferences) {
  oracle::Gen gen(12);
  const auto p = make_lasso(gen.normal_matrix(6, 4), gen.normal_vector(6), 0.1);
  SolverConfig cfg;
  cfg.max_iter = 2;
  const Trajectory t = run(p, cfg, Vector(4, 0.0));
  ASSERT_EQ(t.terminated_by, Termination::max_iter);
  EXPECT_THROW(constants_report(p, GlobalRegion{}, t), NumericalError);
}
