#include "geomopt/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "geomopt/errors.hpp"
#include "geomopt/solver.hpp"

namespace geomopt {

IndexSet active_set(std::span<const double> x, double tol) {
  IndexSet out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::fabs(x[i]) > tol) out.push_back(i);
  return out;
}

double jaccard(const IndexSet& a, const IndexSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  IndexSet both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  const std::size_t uni = a.size() + b.size() - both.size();
  return static_cast<double>(both.size()) / static_cast<double>(uni);
}

namespace {

struct SplitL1 {
  double on = 0.0;
  double off = 0.0;
};

SplitL1 split_l1(std::span<const double> x, std::span<const double> beta_hat, const IndexSet& support) {
  if (x.size() != beta_hat.size()) throw InputError("iterate and reference have different dimensions");
  SplitL1 s;
  std::size_t next = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::fabs(x[i] - beta_hat[i]);
    if (next < support.size() && support[next] == i) {
      s.on += d;
      ++next;
    } else {
      s.off += d;
    }
  }
  return s;
}

}  // namespace

double cone_ratio(std::span<const double> x, std::span<const double> beta_hat, const IndexSet& support) {
  if (support.empty()) throw InputError("cone ratio needs a nonempty support");
  const auto s = split_l1(x, beta_hat, support);
  if (s.on == 0.0) return s.off > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return s.off / s.on;
}

std::size_t ConeMetrics::violations() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const ConeRecord& r) { return !r.lemma_holds; }));
}

ConeMetrics cone_lemma_check(const Trajectory& traj, std::span<const double> beta_hat, double eta, double f_hat) {
  if (!(eta > 0.0)) throw InputError("eta must be positive");
  for (const auto& r : traj.records)
    if (f_hat > r.objective + 1e-12) throw InputError("f_hat exceeds a recorded objective");
  const IndexSet support = active_set(beta_hat, kActiveTol);
  ConeMetrics out;
  for (const auto& r : traj.records) {
    if (r.x.empty()) continue;
    const auto s = split_l1(r.x, beta_hat, support);
    ConeRecord c;
    c.k = r.k;
    c.off_support_l1 = s.off;
    if (support.empty())
      c.cone_ratio = s.off > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    else
      c.cone_ratio = s.on == 0.0 ? (s.off > 0.0 ? std::numeric_limits<double>::infinity() : 0.0) : s.off / s.on;
    c.lemma_rhs = 3.0 * s.on + 2.0 * std::max(0.0, r.objective - f_hat) / eta;
    c.lemma_holds = s.off <= c.lemma_rhs + 1e-12;
    out.records.push_back(c);
  }
  return out;
}

std::optional<std::size_t> identification_time(const Trajectory& traj, const IndexSet& reference_support) {
  if (traj.records.empty()) return std::nullopt;
  std::optional<std::size_t> t;
  for (auto it = traj.records.rbegin(); it != traj.records.rend(); ++it) {
    if (it->active_set != reference_support) break;
    t = it->k;
  }
  return t;
}

double lasso_kkt_residual(const CompositeProblem& p, std::span<const double> x) {
  const double eta = l1_eta(p);
  const Vector g = gradient_f(p, x);
  double ssq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] != 0.0 ? std::fabs(g[i] + eta * std::copysign(1.0, x[i]))
                                 : std::max(0.0, std::fabs(g[i]) - eta);
    ssq += r * r;
  }
  return std::sqrt(ssq);
}

LassoOptimalityData lasso_optimality_data(const CompositeProblem& p, std::span<const double> beta_hat,
                                          double kkt_tol) {
  const double eta = l1_eta(p);
  const double kkt = lasso_kkt_residual(p, beta_hat);
  if (kkt > kkt_tol) throw NotOptimalError("KKT residual " + std::to_string(kkt) + " exceeds tolerance");

  LassoOptimalityData out;
  out.eta = eta;
  out.beta_hat.assign(beta_hat.begin(), beta_hat.end());
  out.s_hat = gradient_f(p, beta_hat);
  for (auto& v : out.s_hat) v = -v;
  out.delta_star = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.s_hat.size(); ++i) {
    const double s = out.s_hat[i];
    if (std::fabs(s - eta) <= kkt_tol) {
      out.iplus.push_back(i);
    } else if (std::fabs(s + eta) <= kkt_tol) {
      out.iminus.push_back(i);
    } else if (std::fabs(s) < eta - kkt_tol) {
      out.i0.push_back(i);
      out.delta_star = std::min(out.delta_star, eta - std::fabs(s));
    } else {
      throw ClassificationError("coordinate " + std::to_string(i) + " is neither tight nor strictly inside");
    }
  }
  return out;
}

Matrix lasso_b_matrix(const LassoOptimalityData& data, std::size_t dim) {
  const std::size_t rows = 2 * data.i0.size() + data.iplus.size() + data.iminus.size();
  Matrix b(rows, dim);
  std::size_t r = 0;
  for (auto i : data.i0) {
    b(r++, i) = 1.0;
    b(r++, i) = -1.0;
  }
  for (auto i : data.iplus) b(r++, i) = -1.0;
  for (auto i : data.iminus) b(r++, i) = 1.0;
  return b;
}

PolyhedralSystem lasso_optimal_set_system(const CompositeProblem& p, const LassoOptimalityData& data) {
  PolyhedralSystem sys;
  sys.g_eq = p.a;
  sys.h_eq = multiply(p.a, data.beta_hat);
  sys.m_ineq = lasso_b_matrix(data, p.dim());
  sys.r_ineq = Vector(sys.m_ineq.rows(), 0.0);
  return sys;
}

}  // namespace geomopt
