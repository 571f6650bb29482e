#include "geomopt/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "geomopt/errors.hpp"

namespace geomopt {
namespace {

double spread(std::span<const double> v, std::size_t count) {
  return 3.0 * std::max(norm2(v), 1.0) / std::sqrt(static_cast<double>(std::max<std::size_t>(count, 1)));
}

IndexSet complement(const IndexSet& s, std::size_t dim) {
  IndexSet out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (next < s.size() && s[next] == i)
      ++next;
    else
      out.push_back(i);
  }
  return out;
}

}  // namespace

std::string restriction_name(const Restriction& r) {
  switch (r.index()) {
    case 0:
      return "global";
    case 1:
      return "support_face";
    case 2:
      return "cone";
    default:
      return "sampled_region";
  }
}

IndexSet restriction_support(const Restriction& r) {
  if (const auto* f = std::get_if<SupportFace>(&r)) return f->support;
  if (const auto* c = std::get_if<ConeRegion>(&r)) return c->support;
  return {};
}

void validate_restriction(const Restriction& r, std::size_t dim) {
  const IndexSet support = restriction_support(r);
  if (!std::is_sorted(support.begin(), support.end()) ||
      std::adjacent_find(support.begin(), support.end()) != support.end())
    throw InputError("support must be sorted without duplicates");
  if (!support.empty() && support.back() >= dim) throw InputError("support index out of range");
  if (const auto* c = std::get_if<ConeRegion>(&r)) {
    if (!(c->factor >= 0.0) || !(c->tolerance_delta >= 0.0))
      throw InputError("cone factor and tolerance must be nonnegative");
    if (c->support.empty()) throw InputError("cone restriction needs a nonempty support");
  }
  if (const auto* s = std::get_if<SampledRegion>(&r)) {
    if (s->center.size() != dim) throw InputError("sampled region center has the wrong dimension");
    if (!(s->scale > 0.0)) throw InputError("sampled region scale must be positive");
  }
}

Vector sample_point(const Restriction& r, std::span<const double> center, Rng& rng) {
  if (const auto* s = std::get_if<SampledRegion>(&r)) {
    Vector x = s->center;
    for (auto& v : x)
      v += s->shape == SampledRegion::Shape::gaussian ? s->scale * rng.normal() : rng.uniform(-s->scale, s->scale);
    return x;
  }

  const std::size_t d = center.size();
  Vector x(center.begin(), center.end());
  if (std::holds_alternative<GlobalRegion>(r)) {
    const double scale = spread(center, d);
    for (auto& v : x) v += scale * rng.normal();
    return x;
  }

  if (const auto* f = std::get_if<SupportFace>(&r)) {
    Vector on(f->support.size());
    for (std::size_t j = 0; j < on.size(); ++j) on[j] = center[f->support[j]];
    const double scale = spread(on, on.size());
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t j = 0; j < on.size(); ++j) {
      const double sign = on[j] < 0.0 ? -1.0 : 1.0;
      x[f->support[j]] = sign * std::fabs(on[j] + scale * rng.normal());
    }
    return x;
  }

  const auto& c = std::get<ConeRegion>(r);
  const IndexSet off = complement(c.support, d);
  const double scale = spread(center, d);
  double on_l1 = 0.0;
  for (auto i : c.support) {
    const double delta = scale * rng.normal();
    x[i] += delta;
    on_l1 += std::fabs(delta);
  }
  if (off.empty()) return x;
  Vector dir(off.size());
  for (auto& v : dir) v = rng.normal();
  const double dir_l1 = norm1(dir);
  const double budget = rng.uniform() * (c.factor * on_l1 + c.tolerance_delta);
  if (dir_l1 > 0.0)
    for (std::size_t j = 0; j < off.size(); ++j) x[off[j]] += budget * dir[j] / dir_l1;
  return x;
}

}  // namespace geomopt
