#include "geomopt/random.hpp"

#include <cmath>
#include <numbers>

#include "geomopt/errors.hpp"

namespace geomopt {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

double Rng::rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw InputError("index draw from an empty range");
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

Vector Rng::normal_vector(std::size_t n) {
  Vector v(n);
  for (auto& x : v) x = normal();
  return v;
}

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::gaussian:
      return "gaussian";
    case EnsembleKind::rademacher:
      return "rademacher";
    case EnsembleKind::spiked:
      return "spiked";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  if (name == "gaussian") return EnsembleKind::gaussian;
  if (name == "rademacher") return EnsembleKind::rademacher;
  if (name == "spiked") return EnsembleKind::spiked;
  throw InputError("unknown ensemble '" + name + "'");
}

Matrix sample_ensemble(const EnsembleSpec& spec) {
  if (spec.n < 1 || spec.d < 1) throw InputError("ensemble dimensions must be positive");
  if (!(spec.rho >= 0.0 && spec.rho < 1.0)) throw InputError("spike correlation must lie in [0, 1)");
  Rng rng(spec.seed);
  Matrix a(spec.n, spec.d);
  switch (spec.kind) {
    case EnsembleKind::gaussian:
      for (std::size_t i = 0; i < spec.n; ++i)
        for (auto& v : a.row(i)) v = rng.normal();
      break;
    case EnsembleKind::rademacher:
      for (std::size_t i = 0; i < spec.n; ++i)
        for (auto& v : a.row(i)) v = rng.rademacher();
      break;
    case EnsembleKind::spiked: {
      const double own = std::sqrt(1.0 - spec.rho);
      const double shared = std::sqrt(spec.rho);
      for (std::size_t i = 0; i < spec.n; ++i) {
        const double w = rng.normal();
        for (auto& v : a.row(i)) v = own * rng.normal() + shared * w;
      }
      break;
    }
  }
  return a;
}

}  // namespace geomopt
