#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "geomopt/matrix.hpp"
#include "geomopt/problem.hpp"
#include "geomopt/sampling.hpp"

namespace geomopt {

enum class HoffmanMethod { closed_form, enumerated, sampled_lower_bound };

std::string to_string(HoffmanMethod m);

struct HoffmanEstimate {
  double value = 0.0;
  HoffmanMethod method = HoffmanMethod::closed_form;
  Restriction restriction = GlobalRegion{};
  std::size_t samples_used = 0;
};

/// 1 / sigma_min^+(G). Throws DegenerateError for a zero matrix.
HoffmanEstimate hoffman_equality(const Matrix& g);

constexpr std::size_t kHoffmanSizeCap = 18;

/// Exact constant over all right-hand sides,
///   max_J 1 / min { ||A_J^T v|| : ||v|| = 1, v_i >= 0 on inequality rows },
/// J ranging over linearly independent row subsets. The inner minimum is
/// attained at a smallest eigenvector of A_S A_S^T for some S in J, so the
/// value is the largest 1/sqrt(lambda_min(A_S A_S^T)) over independent S whose
/// eigenvector is sign-feasible. Throws SizeError above size_cap rows.
HoffmanEstimate hoffman_enumerated(const PolyhedralSystem& sys, std::size_t size_cap = kHoffmanSizeCap);

/// Distance from a point to the solution set.
using DistanceFn = std::function<double(std::span<const double>)>;

/// Largest dist(x, X) / residual(x) over sampled x. Samples come from the
/// restriction around `center` (a feasible point obtained by projecting 0
/// when empty); those with residual <= 1e-12 are skipped. `distance`
/// defaults to Dykstra projection. Throws InsufficientSamplingError when no
/// sample has a positive residual.
HoffmanEstimate hoffman_sampled(const PolyhedralSystem& sys, const Restriction& restriction,
                                std::size_t n_samples, std::uint64_t seed, std::span<const double> center = {},
                                const DistanceFn& distance = {});

/// Same ratio maximized over explicit points.
double hoffman_ratio_max(const PolyhedralSystem& sys, const std::vector<Vector>& points,
                         const DistanceFn& distance = {});

/// 1/sigma_min^+(A_S), or n / sigma_min^+(A_S)^2 when normalized.
HoffmanEstimate restricted_hoffman_support(const Matrix& a, const IndexSet& support, bool normalized);

}  // namespace geomopt
