#pragma once

// The two-variable nonlinear program over the first impulse (x0, y0):
//   minimise dv(x0, y0)  s.t.  g(x0, y0) >= 0,
// with Lagrangian F = dv - lambda * g, its KKT residuals, closed-form
// stationary points, second-order classification and a brute-force oracle.

#include <array>
#include <utility>

namespace hohmann::kkt {

struct KktPoint {
  double x0 = 0.0;
  double y0 = 0.0;
  double lambda = 0.0;
  double yf = 0.0;
  double xf = 0.0;
};

struct KktResiduals {
  double stat_x = 0.0;
  double stat_y = 0.0;
  double complementarity = 0.0;
  double primal_feas = 0.0;  // min(g, 0)
  double dual_feas = 0.0;    // min(lambda, 0)

  double max_abs() const;
};

struct HessianEval {
  double fxx = 0.0;
  double fxy = 0.0;
  double fyy = 0.0;
  double a = 0.0;
  double b = 0.0;
};

enum class SolutionKind { GlobalMinimum, LocalMinimum };

struct ClassifiedSolution {
  KktPoint point;
  SolutionKind kind = SolutionKind::GlobalMinimum;
  double cost = 0.0;
};

struct ProjectedHessianResult {
  bool is_strict_local_min = false;
  std::array<double, 2> tangent_vector{0.0, 0.0};
  double curvature = 0.0;  // z^T (grad^2 F) z for the unit tangent z
};

struct GridResult {
  double x0 = 0.0;
  double y0 = 0.0;
  double cost = 0.0;
  std::size_t feasible_nodes = 0;
};

/// Band around dv0 = 0 (and dvf = 0) treated as degenerate.
inline constexpr double kDegenerateImpulse = 1e-9;

double lagrangian(double x0, double y0, double lambda, double rbar_f);

/// Residuals of the first-order KKT system. Throws DegeneracyError when
/// either impulse magnitude falls inside the degenerate band.
KktResiduals kkt_residuals(const KktPoint& point, double rbar_f);

/// Multiplier solving stat_y = 0 at a point with x0 = 0.
double multiplier_from_stationarity(double y0, double rbar_f);

/// Multiplier exactly as printed for the closed-form solution:
///   (1 + (y0 + 1 - rbar^{-3/2}) / yf) / (2 (1 + y0)(1 - rbar^{-2})).
/// It coincides with multiplier_from_stationarity on the prograde branch only.
double printed_multiplier(double y0, double yf, double rbar_f);

/// {prograde (global), retrograde (local)}.
std::pair<ClassifiedSolution, ClassifiedSolution> stationary_points(double rbar_f);

/// Second partials of the Lagrangian. With `require_stationary` the point must
/// satisfy the KKT residuals to `stationary_tol`.
HessianEval hessian(const KktPoint& point, double rbar_f, bool require_stationary = true,
                    double stationary_tol = 1e-8);

/// Second-order test restricted to the tangent space of the active constraint.
ProjectedHessianResult projected_hessian_test(const KktPoint& point, double rbar_f,
                                              double active_tol = 1e-10);
/// Same test with a caller-supplied Hessian.
ProjectedHessianResult projected_hessian_test(const KktPoint& point, double rbar_f,
                                              const HessianEval& h, double active_tol = 1e-10);

/// Exhaustive search over an n x n grid of feasible nodes. Ties resolved by
/// lexicographic (x0, y0).
GridResult grid_search_oracle(double rbar_f, std::pair<double, double> x0_range,
                              std::pair<double, double> y0_range, std::size_t n_per_axis);

}  // namespace hohmann::kkt
