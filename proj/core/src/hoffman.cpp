#include "geomopt/hoffman.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "geomopt/errors.hpp"
#include "geomopt/linalg.hpp"
#include "geomopt/projection.hpp"

namespace geomopt {

std::string to_string(HoffmanMethod m) {
  switch (m) {
    case HoffmanMethod::closed_form:
      return "closed_form";
    case HoffmanMethod::enumerated:
      return "enumerated";
    case HoffmanMethod::sampled_lower_bound:
      return "sampled_lower_bound";
  }
  return "unknown";
}

HoffmanEstimate hoffman_equality(const Matrix& g) {
  if (g.empty()) throw InputError("Hoffman constant of an empty matrix");
  return {1.0 / smallest_nonzero_singular(g), HoffmanMethod::closed_form, GlobalRegion{}, 0};
}

HoffmanEstimate hoffman_enumerated(const PolyhedralSystem& sys, std::size_t size_cap) {
  sys.validate();
  const std::size_t rows = sys.total_rows();
  if (rows == 0) throw DegenerateError("system has no rows");
  if (rows > size_cap)
    throw SizeError("system has " + std::to_string(rows) + " rows, enumeration cap is " + std::to_string(size_cap));

  const std::size_t n_eq = sys.g_eq.rows();
  const Matrix stacked = vstack(sys.g_eq, sys.m_ineq);
  const Matrix full_gram = gram(stacked.transposed());
  if (norm_inf(stacked.entries()) == 0.0) throw DegenerateError("every row of the system is zero");

  const std::size_t count = std::size_t{1} << rows;
  std::vector<char> dependent(count, 0);
  double rho = std::numeric_limits<double>::infinity();
  IndexSet members;
  for (std::size_t mask = 1; mask < count; ++mask) {
    // dependence is inherited by supersets
    bool skip = false;
    for (std::size_t bit = 0; bit < rows && !skip; ++bit)
      if ((mask >> bit & 1U) && dependent[mask & ~(std::size_t{1} << bit)]) skip = true;
    if (skip) {
      dependent[mask] = 1;
      continue;
    }
    members.clear();
    for (std::size_t bit = 0; bit < rows; ++bit)
      if (mask >> bit & 1U) members.push_back(bit);
    if (members.size() > stacked.cols()) {
      dependent[mask] = 1;
      continue;
    }
    const auto sv = singular_values(stacked.select_rows(members));
    const double smin = sv.back();
    if (!(smin > 1e-10 * sv.front())) {
      dependent[mask] = 1;
      continue;
    }
    const auto eig = symmetric_eigen(full_gram.principal(members));
    bool nonneg = true, nonpos = true;
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (members[j] < n_eq) continue;
      const double v = eig.vectors(j, 0);
      if (v < -1e-12) nonneg = false;
      if (v > 1e-12) nonpos = false;
    }
    if (nonneg || nonpos) rho = std::min(rho, smin);
  }
  if (!std::isfinite(rho)) throw DegenerateError("no sign-feasible independent row subset");
  return {1.0 / rho, HoffmanMethod::enumerated, GlobalRegion{}, 0};
}

double hoffman_ratio_max(const PolyhedralSystem& sys, const std::vector<Vector>& points, const DistanceFn& distance) {
  std::optional<PolyhedralProjector> projector;
  if (!distance) projector.emplace(sys);
  double best = -1.0;
  for (const auto& x : points) {
    const double res = sys.residual(x);
    if (res <= 1e-12) continue;
    const double dist = distance ? distance(x) : projector->distance(x);
    best = std::max(best, dist / res);
  }
  if (best < 0.0) throw InsufficientSamplingError("no sample has a positive residual");
  return best;
}

HoffmanEstimate hoffman_sampled(const PolyhedralSystem& sys, const Restriction& restriction, std::size_t n_samples,
                                std::uint64_t seed, std::span<const double> center, const DistanceFn& distance) {
  sys.validate();
  const std::size_t d = sys.dim();
  validate_restriction(restriction, d);
  std::optional<PolyhedralProjector> projector;
  if (!distance) projector.emplace(sys);
  Vector c(center.begin(), center.end());
  if (c.empty()) c = projector ? projector->project(Vector(d, 0.0)) : PolyhedralProjector(sys).project(Vector(d, 0.0));
  if (c.size() != d) throw InputError("sampling center has the wrong dimension");

  Rng rng(seed);
  double best = -1.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector x = sample_point(restriction, c, rng);
    const double res = sys.residual(x);
    if (res <= 1e-12) continue;
    ++used;
    const double dist = distance ? distance(x) : projector->distance(x);
    best = std::max(best, dist / res);
  }
  if (used == 0) throw InsufficientSamplingError("no sample has a positive residual");
  return {best, HoffmanMethod::sampled_lower_bound, restriction, used};
}

HoffmanEstimate restricted_hoffman_support(const Matrix& a, const IndexSet& support, bool normalized) {
  if (support.empty()) throw InputError("support must be nonempty");
  const double s = smallest_nonzero_singular(a.select_columns(support));
  const double value = normalized ? static_cast<double>(a.rows()) / (s * s) : 1.0 / s;
  return {value, HoffmanMethod::closed_form, SupportFace{support}, 0};
}

}  // namespace geomopt
