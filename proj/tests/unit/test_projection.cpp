#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "geomopt/errors.hpp"
#include "geomopt/projection.hpp"
#include "test_support.hpp"

using namespace geomopt;

TEST(SoftThreshold, ClosedFormAndOptimality) {
  EXPECT_EQ(soft_threshold(Vector{3, -0.5, -2, 1}, 1.0), (Vector{2, 0, -1, 0}));
  oracle::Gen gen(1);
  for (int t = 0; t < 200; ++t) {
    const Vector v = scaled(gen.normal_vector(6), 2.0);
    const double thr = gen.uniform(0.01, 2.0);
    const Vector u = soft_threshold(v, thr);
    for (std::size_t i = 0; i < v.size(); ++i) {
      // 0 in u - v + thr d|u|
      if (u[i] != 0.0)
        EXPECT_NEAR(v[i] - u[i], std::copysign(thr, u[i]), 1e-10);
      else
        EXPECT_LE(std::fabs(v[i]), thr + 1e-10);
    }
  }
}

TEST(BoxHyperplane, WorkedExample) {
  const auto out = project_box_hyperplane(Vector{0.5, 0.3}, Vector{1, -1}, 1.0);
  EXPECT_NEAR(out.tau, 0.1, 1e-12);
  EXPECT_NEAR(out.point[0], 0.4, 1e-12);
  EXPECT_NEAR(out.point[1], 0.4, 1e-12);
}

TEST(BoxHyperplane, RejectsBadArguments) {
  EXPECT_THROW(project_box_hyperplane(Vector{1, 2}, Vector{1}, 1.0), InputError);
  EXPECT_THROW(project_box_hyperplane(Vector{1, 2}, Vector{1, -1}, 0.0), InputError);
}

TEST(BoxHyperplane, FeasibleIdempotentAndVariational) {
  oracle::Gen gen(2);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + gen.index(12);
    Vector labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i % 2 == 0 ? 1.0 : -1.0;
    const double c = gen.uniform(0.1, 3.0);
    const Vector v = scaled(gen.normal_vector(n), gen.uniform(0.1, 20.0));
    const Vector u = project_box_hyperplane(v, labels, c).point;
    EXPECT_LE(std::fabs(dot(labels, u)), 1e-10);
    for (double x : u) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, c);
    }
    EXPECT_LE(distance(project_box_hyperplane(u, labels, c).point, u), 1e-9);
    // <v - u, z - u> <= 0 for feasible z; pairs of opposite labels give feasible points
    for (int k = 0; k < 5; ++k) {
      Vector z(n, 0.0);
      const double s = gen.uniform(0.0, c);
      const std::size_t i = 2 * gen.index(n / 2);
      z[i] = s;
      z[i + 1] = s;
      EXPECT_LE(dot(subtract(v, u), subtract(z, u)), 1e-9 * (1 + norm2(v)));
    }
  }
}

TEST(BoxHyperplane, Nonexpansive) {
  oracle::Gen gen(3);
  const Vector labels{1, 1, -1, -1, 1};
  for (int t = 0; t < 300; ++t) {
    const Vector a = scaled(gen.normal_vector(5), 3.0), b = scaled(gen.normal_vector(5), 3.0);
    const Vector pa = project_box_hyperplane(a, labels, 1.0).point, pb = project_box_hyperplane(b, labels, 1.0).point;
    EXPECT_LE(distance(pa, pb), distance(a, b) + 1e-9);
  }
}

TEST(Dykstra, MatchesFineGridOnARandomPolygon) {
  oracle::Gen gen(4);
  for (int t = 0; t < 5; ++t) {
    PolyhedralSystem s;
    const std::size_t m = 4 + gen.index(3);
    s.m_ineq = Matrix(m, 2);
    s.r_ineq = Vector(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double th = 2 * M_PI * (static_cast<double>(i) + gen.uniform(0, 0.8)) / static_cast<double>(m);
      s.m_ineq(i, 0) = std::cos(th) * gen.uniform(0.7, 1.5);
      s.m_ineq(i, 1) = std::sin(th) * gen.uniform(0.7, 1.5);
    }
    const Vector v = scaled(gen.normal_vector(2), 2.5);
    const Vector p = PolyhedralProjector(s).project(v);

    auto feasible = [&](double x, double y) {
      for (std::size_t i = 0; i < m; ++i)
        if (s.m_ineq(i, 0) * x + s.m_ineq(i, 1) * y > 1.0) return false;
      return true;
    };
    auto search = [&](double c0, double c1, double half, int n) {
      double best = std::numeric_limits<double>::infinity();
      Vector arg{c0, c1};
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          const double x = c0 - half + 2 * half * i / n, y = c1 - half + 2 * half * j / n;
          if (!feasible(x, y)) continue;
          const double d = (x - v[0]) * (x - v[0]) + (y - v[1]) * (y - v[1]);
          if (d < best) {
            best = d;
            arg = {x, y};
          }
        }
      return arg;
    };
    Vector g = search(0, 0, 4.0, 800);
    g = search(g[0], g[1], 0.02, 400);
    EXPECT_LE(distance(p, g), 1e-3);
  }
}

TEST(Dykstra, SatisfiesTheVariationalInequality) {
  oracle::Gen gen(5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = 3 + gen.index(4);
    const auto s = oracle::random_mixed_system(gen, d, gen.index(2), 1 + gen.index(d));
    const PolyhedralProjector proj(s);
    const Vector v = scaled(gen.normal_vector(d), 3.0);
    const Vector p = proj.project(v);
    EXPECT_LE(s.residual(p), 1e-9);
    EXPECT_NEAR(proj.distance(v), distance(v, p), 1e-12);
    for (int k = 0; k < 10; ++k) {
      const Vector z = proj.project(scaled(gen.normal_vector(d), 3.0));
      EXPECT_LE(dot(subtract(v, p), subtract(z, p)), 1e-8 * (1 + norm2(v)));
    }
  }
}

TEST(Dykstra, EqualityOnlyIsTheAffineProjection) {
  PolyhedralSystem s;
  s.g_eq = Matrix::from_rows({{1, 1, 0}});
  s.h_eq = {2.0};
  s.m_ineq = Matrix(0, 3);
  const Vector p = PolyhedralProjector(s).project(Vector{0, 0, 5});
  EXPECT_NEAR(p[0], 1.0, 1e-14);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
  EXPECT_NEAR(p[2], 5.0, 1e-14);
}

TEST(Dykstra, RedundantEqualityRowsAreHandled) {
  PolyhedralSystem s;
  s.g_eq = Matrix::from_rows({{1, 1}, {2, 2}});
  s.h_eq = {1.0, 2.0};
  s.m_ineq = Matrix::from_rows({{-1, 0}});
  s.r_ineq = {0.0};
  const Vector p = PolyhedralProjector(s).project(Vector{-3, 0});
  EXPECT_NEAR(p[0], 0.0, 1e-9);
  EXPECT_NEAR(p[1], 1.0, 1e-9);
}

TEST(Dykstra, IllConditionedConeConvergesWithinTheCap) {
  // two nearly parallel halfspaces meeting at the origin
  PolyhedralSystem s;
  s.m_ineq = Matrix::from_rows({{1.0, 0.01}, {1.0, -0.01}, {0.0, 0.0}});
  s.m_ineq(2, 1) = -1e-3;
  s.r_ineq = {0.0, 0.0, 0.0};
  const Vector p = PolyhedralProjector(s).project(Vector{3.0, 0.1});
  EXPECT_LE(s.residual(p), 1e-10);
  oracle::Gen gen(6);
  for (int k = 0; k < 20; ++k) {
    const Vector z = PolyhedralProjector(s).project(scaled(gen.normal_vector(2), 3.0));
    EXPECT_LE(dot(subtract(Vector{3.0, 0.1}, p), subtract(z, p)), 1e-9);
  }
}

TEST(Dykstra, SweepCapRaisesWithResidual) {
  PolyhedralSystem s;
  s.m_ineq = Matrix::from_rows({{1.0, 0.2}, {1.0, -0.2}});
  s.r_ineq = {0.0, 0.0};
  const PolyhedralProjector proj(s, DykstraSettings{2, 1e-11});
  try {
    proj.project(Vector{5.0, 0.3});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_GE(e.residual(), 0.0);
    EXPECT_TRUE(std::isfinite(e.residual()));
  }
}

TEST(Dykstra, RejectsWrongDimension) {
  PolyhedralSystem s;
  s.m_ineq = Matrix::from_rows({{1.0, 0.0}});
  s.r_ineq = {0.0};
  EXPECT_THROW(PolyhedralProjector(s).project(Vector{1.0}), InputError);
  s.r_ineq = {};
  EXPECT_THROW(PolyhedralProjector{s}, InputError);
}
