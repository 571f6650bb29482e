#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "geomopt/matrix.hpp"

namespace geomopt {

/// Seeded generator built on std::mt19937_64. Normals use Box-Muller and
/// uniforms take the top 53 bits, so streams are reproducible across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher();
  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n);
  Vector normal_vector(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

enum class EnsembleKind { gaussian, rademacher, spiked };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::gaussian;
  std::size_t n = 1;
  std::size_t d = 1;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

std::string to_string(EnsembleKind kind);
/// Throws InputError on an unknown name.
EnsembleKind parse_ensemble_kind(const std::string& name);

/// n x d design. Spiked rows are sqrt(1-rho) z + sqrt(rho) w 1 with z, w
/// standard normal, giving covariance (1-rho) I + rho 11^T.
Matrix sample_ensemble(const EnsembleSpec& spec);

}  // namespace geomopt
