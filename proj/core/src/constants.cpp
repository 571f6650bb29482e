#include "geomopt/constants.hpp"

#include <cmath>
#include <limits>

#include "geomopt/analytics.hpp"
#include "geomopt/errors.hpp"
#include "geomopt/linalg.hpp"
#include "geomopt/projection.hpp"

namespace geomopt {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw InputError(std::string(name) + " must be positive");
}

}  // namespace

double pl_from_hoffman_indicator(double alpha, double h_k) {
  require_positive(alpha, "alpha");
  require_positive(h_k, "Hoffman constant");
  return alpha / (h_k * h_k);
}

double eb_from_pl(double nu, double l) {
  require_positive(nu, "nu");
  require_positive(l, "L");
  return 1.0 / l + 2.0 / nu;
}

double pl_from_eb(double mu, double l) {
  require_positive(mu, "mu");
  require_positive(l, "L");
  return l / (1.0 + 4.0 * l * l * mu * mu);
}

double eb_polyhedral_nonsmooth(double l, double alpha, double h_k, double b_norm, double gamma_k) {
  require_positive(l, "L");
  require_positive(alpha, "alpha");
  require_positive(h_k, "Hoffman constant");
  require_positive(gamma_k, "gamma");
  if (!(b_norm >= 0.0)) throw InputError("||B|| must be nonnegative");
  const double growth = 1.0 + b_norm * l / gamma_k;
  return 1.0 / l + (8.0 / alpha) * h_k * h_k * growth * growth + 8.0 * h_k * b_norm / gamma_k;
}

double pl_from_qg(double gamma_k, double l) {
  require_positive(gamma_k, "gamma");
  require_positive(l, "L");
  if (l < gamma_k / 2.0) throw PreconditionError("quadratic growth conversion needs L >= gamma/2");
  return gamma_k / 2.0;
}

double firm_convexity_lb_lasso(double f_beta0, double eta, double delta_star) {
  require_positive(f_beta0, "F(beta0)");
  require_positive(eta, "eta");
  require_positive(delta_star, "delta*");
  double worst = f_beta0 / (2.0 * eta * eta);
  if (std::isfinite(delta_star)) worst = std::max(worst, f_beta0 / (eta * delta_star));
  return 2.0 / worst;
}

double measured_pl(const CompositeProblem& p, const Restriction& restriction, std::size_t n_samples,
                   std::uint64_t seed, double f_star, std::span<const double> center) {
  validate_restriction(restriction, p.dim());
  const double l = smoothness(p);
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector x = sample_point(restriction, center, rng);
    const double fx = objective(p, x);
    if (!std::isfinite(fx) || !(fx > f_star + 1e-10)) continue;
    ++used;
    best = std::min(best, generalized_gradient_size(p, x, l) / (2.0 * (fx - f_star)));
  }
  if (used == 0) throw InsufficientSamplingError("no admissible sample for the PL estimate");
  return best;
}

double measured_eb(const CompositeProblem& p, const Restriction& restriction, std::size_t n_samples,
                   std::uint64_t seed, const OptimalSetProbe& probe, std::span<const double> center) {
  validate_restriction(restriction, p.dim());
  const double l = smoothness(p);
  std::optional<PolyhedralProjector> projector;
  if (const auto* sys = std::get_if<PolyhedralSystem>(&probe)) projector.emplace(*sys);
  Rng rng(seed);
  double best = -1.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector x = sample_point(restriction, center, rng);
    if (!std::isfinite(regularizer_value(p, x))) continue;
    const double gm = norm2(gradient_mapping(p, x, 1.0 / l));
    if (gm <= 1e-12) continue;
    const double dist = projector ? projector->distance(x) : distance(x, std::get<Vector>(probe));
    best = std::max(best, dist / gm);
  }
  if (best < 0.0) throw InsufficientSamplingError("no admissible sample for the EB estimate");
  return best;
}

namespace {

struct Spectrum {
  double top = 0.0;
  double bottom = 0.0;  // smallest nonzero
  bool full_rank = false;
};

Spectrum column_spectrum(const Matrix& m) {
  const auto sv = singular_values(m);
  Spectrum s;
  if (sv.empty() || sv.front() == 0.0) throw DegenerateError("matrix has no nonzero singular value");
  s.top = sv.front();
  const double tol = 1e-10 * s.top;
  std::size_t rank = 0;
  for (double v : sv)
    if (v > tol) {
      s.bottom = v;
      ++rank;
    }
  s.full_rank = rank == m.cols();
  return s;
}

Spectrum psd_spectrum(const Matrix& q) {
  const auto eig = symmetric_eigen(q);
  Spectrum s;
  s.top = eig.values.back();
  if (!(s.top > 0.0)) throw DegenerateError("quadratic form is zero");
  std::size_t rank = 0;
  for (double v : eig.values)
    if (v > 1e-10 * s.top) {
      if (rank == 0) s.bottom = v;
      ++rank;
    }
  s.full_rank = rank == q.rows();
  return s;
}

struct Pair {
  double l = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  std::optional<HoffmanEstimate> h;
  std::string route;
};

struct Context {
  const CompositeProblem& p;
  const ConstantsOptions& opt;
  Vector x_ref;
  double f_star = 0.0;
  double f0 = 0.0;
  double alpha = 1.0;
  double l_global = 0.0;
};

Pair finish(Pair pr) {
  if (pr.mu == 0.0) pr.mu = eb_from_pl(pr.nu, pr.l);
  return pr;
}

Pair measured_pair(const Context& c, const Restriction& r, double l, std::optional<HoffmanEstimate> h) {
  Pair pr;
  pr.l = l;
  pr.nu = measured_pl(c.p, r, c.opt.pl_samples, c.opt.seed, c.f_star, c.x_ref);
  pr.h = std::move(h);
  pr.route = "measured";
  return finish(pr);
}

// Least-squares smooth part on the columns of `cols` (all columns when empty).
Pair least_squares_pair(const Context& c, const IndexSet& cols, const Restriction& r) {
  const Matrix m = cols.empty() ? c.p.a : c.p.a.select_columns(cols);
  const Spectrum s = column_spectrum(m);
  const double scale = is_normalized(c.p) ? 1.0 / static_cast<double>(c.p.a.rows()) : 1.0;
  Pair pr;
  pr.l = s.top * s.top * scale;
  pr.h = HoffmanEstimate{1.0 / s.bottom, HoffmanMethod::closed_form, r, 0};
  pr.nu = pl_from_hoffman_indicator(c.alpha, pr.h->value);
  pr.route = "strong_convexity_hoffman";
  return finish(pr);
}

Pair quadratic_pair(const Context& c, const IndexSet& cols, const Restriction& r, const std::string& route) {
  const Matrix& q = c.p.quadratic->q;
  const Spectrum s = psd_spectrum(cols.empty() ? q : q.principal(cols));
  Pair pr;
  pr.l = s.top;
  pr.h = HoffmanEstimate{1.0 / std::sqrt(s.bottom), HoffmanMethod::closed_form, r, 0};
  pr.nu = pl_from_hoffman_indicator(c.alpha, pr.h->value);
  pr.route = route;
  return finish(pr);
}

}  // namespace

ConstantsReport constants_report(const CompositeProblem& p, const Restriction& restriction,
                                 const Trajectory& reference, const ConstantsOptions& options) {
  p.validate();
  validate_restriction(restriction, p.dim());
  if (reference.records.empty() || reference.final_x().empty())
    throw InputError("reference trajectory must store its final iterate");
  if (reference.terminated_by != Termination::tolerance)
    throw NumericalError("reference run did not reach its tolerance", reference.records.back().gradmap_norm);

  Context c{p, options, reference.final_x(), best_objective(reference), reference.records.front().objective,
            strong_convexity(p), smoothness(p)};
  const IndexSet support = restriction_support(restriction);
  const bool face = std::holds_alternative<SupportFace>(restriction);
  const bool whole = std::holds_alternative<GlobalRegion>(restriction);

  ConstantsReport rep;
  rep.restriction = restriction_name(restriction);
  Pair global, local;
  const bool least_squares = p.smooth_kind != SmoothKind::quadratic_form;

  if (least_squares && is_l1(p)) {
    const auto data = lasso_optimality_data(p, c.x_ref, options.kkt_tol);
    const double eta = data.eta;
    const Matrix b = lasso_b_matrix(data, p.dim());
    const double b_norm = b.rows() > 0 ? largest_singular(b) : 0.0;
    const double gamma = firm_convexity_lb_lasso(c.f0, eta, data.delta_star);
    rep.B_norm = b_norm;
    rep.gamma_lb = gamma;
    rep.delta_star = data.delta_star;

    const PolyhedralSystem sys = lasso_optimal_set_system(p, data);
    const IndexSet hat = active_set(data.beta_hat, kActiveTol);
    bool unique = data.delta_star > 0.0;
    if (unique && !hat.empty()) unique = column_spectrum(p.a.select_columns(hat)).full_rank;
    DistanceFn dist;
    if (unique) dist = [beta = data.beta_hat](std::span<const double> x) { return distance(x, beta); };

    auto polyhedral_pair = [&](const Restriction& r, double l) {
      Pair pr;
      pr.l = l;
      if (std::holds_alternative<GlobalRegion>(r) && sys.total_rows() <= kHoffmanSizeCap) {
        pr.h = hoffman_enumerated(sys);
      } else {
        pr.h = hoffman_sampled(sys, r, options.hoffman_samples, options.seed, c.x_ref, dist);
      }
      pr.h->restriction = r;
      pr.mu = eb_polyhedral_nonsmooth(l, c.alpha, pr.h->value, b_norm, gamma);
      pr.nu = pl_from_eb(pr.mu, l);
      pr.route = "polyhedral_eb";
      return pr;
    };

    if (column_spectrum(p.a).full_rank)
      global = least_squares_pair(c, {}, GlobalRegion{});
    else
      global = polyhedral_pair(GlobalRegion{}, c.l_global);

    if (whole) {
      local = global;
    } else if (face) {
      const Matrix as = p.a.select_columns(support);
      if (column_spectrum(as).full_rank) {
        local = least_squares_pair(c, support, restriction);
      } else {
        const double top = largest_singular(as);
        local = polyhedral_pair(restriction, top * top * (is_normalized(p) ? 1.0 / p.a.rows() : 1.0));
      }
    } else {
      local = measured_pair(c, restriction, c.l_global,
                            hoffman_sampled(sys, restriction, options.hoffman_samples, options.seed, c.x_ref, dist));
    }
  } else if (least_squares && std::holds_alternative<ZeroReg>(p.reg)) {
    global = least_squares_pair(c, {}, GlobalRegion{});
    if (whole)
      local = global;
    else if (face)
      local = least_squares_pair(c, support, restriction);
    else
      local = measured_pair(c, restriction, c.l_global, std::nullopt);
  } else if (!least_squares &&
             (std::holds_alternative<ZeroReg>(p.reg) || std::holds_alternative<BoxHyperplaneIndicator>(p.reg))) {
    const std::string route =
        std::holds_alternative<ZeroReg>(p.reg) ? "strong_convexity_hoffman" : "indicator_hoffman";
    global = quadratic_pair(c, {}, GlobalRegion{}, route);
    if (whole)
      local = global;
    else if (face)
      local = quadratic_pair(c, support, restriction, route);
    else
      local = measured_pair(c, restriction, c.l_global, std::nullopt);
  } else {
    std::optional<HoffmanEstimate> h;
    if (const auto* ind = std::get_if<PolyhedralIndicator>(&p.reg); ind && ind->set.total_rows() > 0) {
      if (ind->set.total_rows() <= kHoffmanSizeCap)
        h = hoffman_enumerated(ind->set);
      else
        h = hoffman_sampled(ind->set, GlobalRegion{}, options.hoffman_samples, options.seed, c.x_ref);
    }
    global = measured_pair(c, GlobalRegion{}, c.l_global, h);
    if (whole) {
      local = global;
    } else {
      double l_k = c.l_global;
      if (face && least_squares) {
        const double top = largest_singular(p.a.select_columns(support));
        l_k = top * top * (is_normalized(p) ? 1.0 / p.a.rows() : 1.0);
      }
      local = measured_pair(c, restriction, l_k, std::nullopt);
    }
  }

  rep.L = global.l;
  rep.L_K = local.l;
  rep.H = global.h;
  rep.H_K = local.h;
  rep.nu = global.nu;
  rep.nu_K = local.nu;
  rep.nu_provenance = local.route;
  rep.mu_K = local.mu;
  rep.kappa = rep.L / rep.nu;
  rep.kappa_K = rep.L_K / rep.nu_K;
  return rep;
}

}  // namespace geomopt
