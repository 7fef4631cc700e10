#include "hohmann/kkt_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hohmann/errors.hpp"
#include "hohmann/hohmann_analytic.hpp"

namespace hohmann::kkt {

namespace {

void require_ratio(double rbar_f) {
  if (!(rbar_f > 1.0) || !std::isfinite(rbar_f)) {
    throw DomainError("radius ratio must exceed 1, got " + std::to_string(rbar_f));
  }
}

double shrink(double rbar_f) { return 1.0 - 1.0 / (rbar_f * rbar_f); }

struct Magnitudes {
  double dv0;
  double dvf;
  CostShape shape;
};

Magnitudes magnitudes(double x0, double y0, double rbar_f) {
  const CostShape s = cost_shape(rbar_f);
  const double rad = x0 * x0 + (y0 + s.a) * (y0 + s.a) - s.b;
  if (rad < 0.0) {
    throw DomainError("second-impulse radicand is negative (" + std::to_string(rad) + ")");
  }
  return {std::hypot(x0, y0), std::sqrt(rad), s};
}

}  // namespace

double KktResiduals::max_abs() const {
  return std::max({std::abs(stat_x), std::abs(stat_y), std::abs(complementarity),
                   std::abs(primal_feas), std::abs(dual_feas)});
}

double lagrangian(double x0, double y0, double lambda, double rbar_f) {
  const Magnitudes m = magnitudes(x0, y0, rbar_f);
  if (m.dv0 == 0.0) throw DomainError("lagrangian: first impulse must be non-zero");
  return m.dv0 + m.dvf - lambda * constraint(x0, y0, rbar_f);
}

KktResiduals kkt_residuals(const KktPoint& p, double rbar_f) {
  require_ratio(rbar_f);
  if (std::hypot(p.x0, p.y0) < kDegenerateImpulse) {
    throw DegeneracyError("kkt_residuals: first impulse inside the degenerate band");
  }
  const Magnitudes m = magnitudes(p.x0, p.y0, rbar_f);
  if (m.dv0 < kDegenerateImpulse || m.dvf < kDegenerateImpulse) {
    throw DegeneracyError("kkt_residuals: impulse magnitude inside the degenerate band");
  }
  const double g = constraint(p.x0, p.y0, rbar_f);
  KktResiduals res;
  res.stat_x = p.x0 / m.dv0 + p.x0 / m.dvf - 2.0 * p.lambda * p.x0;
  res.stat_y = p.y0 / m.dv0 + (p.y0 + m.shape.a) / m.dvf -
               2.0 * p.lambda * (1.0 + p.y0) * shrink(rbar_f);
  res.complementarity = p.lambda * g;
  res.primal_feas = std::min(g, 0.0);
  res.dual_feas = std::min(p.lambda, 0.0);
  return res;
}

double multiplier_from_stationarity(double y0, double rbar_f) {
  require_ratio(rbar_f);
  const Magnitudes m = magnitudes(0.0, y0, rbar_f);
  if (m.dv0 < kDegenerateImpulse || m.dvf < kDegenerateImpulse) {
    throw DegeneracyError("multiplier_from_stationarity: degenerate impulse");
  }
  return (y0 / m.dv0 + (y0 + m.shape.a) / m.dvf) / (2.0 * (1.0 + y0) * shrink(rbar_f));
}

double printed_multiplier(double y0, double yf, double rbar_f) {
  require_ratio(rbar_f);
  const double a = cost_shape(rbar_f).a;
  return (1.0 + (y0 + a) / yf) / (2.0 * (1.0 + y0) * shrink(rbar_f));
}

std::pair<ClassifiedSolution, ClassifiedSolution> stationary_points(double rbar_f) {
  require_ratio(rbar_f);
  const double s = std::sqrt(2.0 * rbar_f / (1.0 + rbar_f));
  const double q = std::sqrt(2.0 / (1.0 + rbar_f));
  const double root = 1.0 / std::sqrt(rbar_f);

  auto build = [&](double y0, double yf, SolutionKind kind) {
    ClassifiedSolution c;
    c.point.x0 = 0.0;
    c.point.y0 = y0;
    c.point.xf = 0.0;
    c.point.yf = yf;
    c.point.lambda = multiplier_from_stationarity(y0, rbar_f);
    c.kind = kind;
    c.cost = std::abs(y0) + std::abs(yf);
    return c;
  };
  ClassifiedSolution pro = build(s - 1.0, root * (1.0 - q), SolutionKind::GlobalMinimum);
  ClassifiedSolution retro = build(-s - 1.0, root * (1.0 + q), SolutionKind::LocalMinimum);

  const double printed = printed_multiplier(pro.point.y0, pro.point.yf, rbar_f);
  if (std::abs(printed - pro.point.lambda) > 1e-10 * std::max(1.0, std::abs(printed))) {
    throw Error("closed-form multiplier disagrees with stationarity: " + std::to_string(printed) +
                " vs " + std::to_string(pro.point.lambda));
  }
  return {pro, retro};
}

HessianEval hessian(const KktPoint& p, double rbar_f, bool require_stationary,
                    double stationary_tol) {
  require_ratio(rbar_f);
  if (require_stationary && kkt_residuals(p, rbar_f).max_abs() > stationary_tol) {
    throw PreconditionError("hessian: point is not stationary");
  }
  const Magnitudes m = magnitudes(p.x0, p.y0, rbar_f);
  if (m.dv0 < kDegenerateImpulse || m.dvf < kDegenerateImpulse) {
    throw DegeneracyError("hessian: degenerate impulse");
  }
  const double x = p.x0, y = p.y0, ya = p.y0 + m.shape.a;
  const double d03 = m.dv0 * m.dv0 * m.dv0;
  const double df3 = m.dvf * m.dvf * m.dvf;
  HessianEval h;
  h.a = m.shape.a;
  h.b = m.shape.b;
  h.fxx = y * y / d03 + (ya * ya - m.shape.b) / df3 - 2.0 * p.lambda;
  h.fxy = -x * y / d03 - x * ya / df3;
  h.fyy = x * x / d03 + (x * x - m.shape.b) / df3 - 2.0 * p.lambda * shrink(rbar_f);
  return h;
}

ProjectedHessianResult projected_hessian_test(const KktPoint& p, double rbar_f,
                                              double active_tol) {
  return projected_hessian_test(p, rbar_f, hessian(p, rbar_f), active_tol);
}

ProjectedHessianResult projected_hessian_test(const KktPoint& p, double rbar_f,
                                              const HessianEval& h, double active_tol) {
  require_ratio(rbar_f);
  const double g = constraint(p.x0, p.y0, rbar_f);
  if (std::abs(g) > active_tol) {
    throw PreconditionError("projected_hessian_test: constraint is not active (g = " +
                            std::to_string(g) + ")");
  }
  if (!(p.lambda > 0.0)) {
    throw PreconditionError("projected_hessian_test: multiplier must be positive");
  }
  const double gx = 2.0 * p.x0;
  const double gy = 2.0 * (1.0 + p.y0) * shrink(rbar_f);
  const double n = std::hypot(gx, gy);
  if (n == 0.0) throw PreconditionError("projected_hessian_test: constraint gradient vanishes");
  // Orthogonal complement of grad g, oriented so the x0 component is >= 0.
  double z1 = -gy / n, z2 = gx / n;
  if (z1 < 0.0 || (z1 == 0.0 && z2 < 0.0)) {
    z1 = -z1;
    z2 = -z2;
  }
  ProjectedHessianResult r;
  r.tangent_vector = {z1 == 0.0 ? 0.0 : z1, z2 == 0.0 ? 0.0 : z2};
  r.curvature = z1 * z1 * h.fxx + 2.0 * z1 * z2 * h.fxy + z2 * z2 * h.fyy;
  r.is_strict_local_min = r.curvature > 0.0;
  return r;
}

GridResult grid_search_oracle(double rbar_f, std::pair<double, double> x0_range,
                              std::pair<double, double> y0_range, std::size_t n_per_axis) {
  require_ratio(rbar_f);
  if (n_per_axis < 3) throw DomainError("grid_search_oracle: need at least 3 nodes per axis");
  if (!(x0_range.second > x0_range.first) || !(y0_range.second > y0_range.first)) {
    throw DomainError("grid_search_oracle: empty range");
  }
  const double dx = (x0_range.second - x0_range.first) / static_cast<double>(n_per_axis - 1);
  const double dy = (y0_range.second - y0_range.first) / static_cast<double>(n_per_axis - 1);
  GridResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_per_axis; ++i) {
    const double x0 = x0_range.first + dx * static_cast<double>(i);
    for (std::size_t j = 0; j < n_per_axis; ++j) {
      const double y0 = y0_range.first + dy * static_cast<double>(j);
      const auto parts = try_cost_parts(x0, y0, rbar_f);
      if (!parts || parts->dv0 < kDegenerateImpulse) continue;
      ++best.feasible_nodes;
      const double c = parts->total();
      // Strict comparison keeps the lexicographically first minimiser.
      if (c < best.cost) {
        best.cost = c;
        best.x0 = x0;
        best.y0 = y0;
      }
    }
  }
  if (best.feasible_nodes == 0) throw EmptyResultError("grid_search_oracle: no feasible node");
  return best;
}

}  // namespace hohmann::kkt
