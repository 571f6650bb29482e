#pragma once

#include <string>
#include <variant>

#include "geomopt/matrix.hpp"
#include "geomopt/random.hpp"

namespace geomopt {

struct GlobalRegion {};

/// Points supported on `support` with the sign pattern of the reference.
struct SupportFace {
  IndexSet support;
};

/// { x_ref + D : ||D_{S^c}||_1 <= factor ||D_S||_1 + tolerance_delta }
struct ConeRegion {
  IndexSet support;
  double factor = 3.0;
  double tolerance_delta = 0.0;
};

/// Explicit sampler: Gaussian center + scale z, or the box center +- scale.
struct SampledRegion {
  enum class Shape { gaussian, box };
  Shape shape = Shape::gaussian;
  Vector center;
  double scale = 1.0;
};

using Restriction = std::variant<GlobalRegion, SupportFace, ConeRegion, SampledRegion>;

/// "global", "support_face", "cone" or "sampled_region".
std::string restriction_name(const Restriction& r);
/// Support of a face or cone restriction, empty otherwise.
IndexSet restriction_support(const Restriction& r);
void validate_restriction(const Restriction& r, std::size_t dim);

/// Draws one point of the region around `center` (ignored by SampledRegion).
///
/// global: center + (3 max(||center||, 1) / sqrt(d)) z.
/// support_face: the same on the support coordinates, reflected to keep the
///   signs of the center, zero elsewhere.
/// cone: D_S Gaussian, D_{S^c} a Gaussian direction rescaled to l1 norm
///   u (factor ||D_S||_1 + tolerance_delta) with u uniform, so every draw
///   lies in the cone without rejection.
Vector sample_point(const Restriction& r, std::span<const double> center, Rng& rng);

}  // namespace geomopt
