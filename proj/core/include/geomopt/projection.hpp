#pragma once

#include <optional>

#include "geomopt/matrix.hpp"
#include "geomopt/problem.hpp"

namespace geomopt {

/// sign(v_i) max(|v_i| - threshold, 0)
Vector soft_threshold(std::span<const double> v, double threshold);

struct BoxHyperplaneProjection {
  Vector point;
  double tau = 0.0;
};

/// Projection onto { u : labels^T u = 0, 0 <= u <= c_cap } as
/// clip(v - tau labels, 0, c_cap) with tau found by bisection.
BoxHyperplaneProjection project_box_hyperplane(std::span<const double> v, std::span<const double> labels,
                                               double c_cap);

struct DykstraSettings {
  int max_sweeps = 10000;
  double move_tol = 1e-11;
};

/// Euclidean projection onto a polyhedron by Dykstra's method. The equality
/// block is one affine set projected through (G G^T)^+; each inequality row is
/// a halfspace. Every few sweeps the halfspaces carrying a nonzero Dykstra
/// increment are taken as the active set and the projection onto their
/// intersection with the equality block is solved directly; it is returned
/// when its multipliers and the remaining constraints certify optimality.
class PolyhedralProjector {
 public:
  explicit PolyhedralProjector(PolyhedralSystem system, DykstraSettings settings = {});

  const PolyhedralSystem& system() const noexcept { return system_; }
  /// Throws NumericalError carrying the final residual when the sweep cap is hit.
  Vector project(std::span<const double> v) const;
  double distance(std::span<const double> v) const;

 private:
  void project_affine(std::span<double> x) const;
  std::optional<Vector> project_on_active(std::span<const double> v, const IndexSet& active) const;

  PolyhedralSystem system_;
  DykstraSettings settings_;
  Matrix gram_pinv_;  // (G G^T)^+
  Vector row_norm_sq_;
};

}  // namespace geomopt
