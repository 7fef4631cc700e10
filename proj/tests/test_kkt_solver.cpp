#include <gtest/gtest.h>

#include <cmath>

#include "hohmann/errors.hpp"
#include "hohmann/hohmann_analytic.hpp"
#include "hohmann/kkt_solver.hpp"
#include "support.hpp"

using namespace hohmann;
using namespace hohmann::kkt;
using testing_support::rel_err;

namespace {

// Independent evaluation of the Lagrangian from its definition.
double lagrangian_oracle(double x0, double y0, double lambda, double rbar) {
  const double a = 1 - std::pow(rbar, -1.5);
  const double b = (rbar - 1) * (rbar - 1) * (2 * rbar + 1) / (rbar * rbar * rbar);
  const double g = x0 * x0 + (1 + y0) * (1 + y0) * (1 - 1 / (rbar * rbar)) - 2 * (1 - 1 / rbar);
  return std::sqrt(x0 * x0 + y0 * y0) + std::sqrt(x0 * x0 + (y0 + a) * (y0 + a) - b) - lambda * g;
}

std::vector<double> log_ratios(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / n));
  return out;
}

}  // namespace

TEST(Lagrangian, MultiplierOff) {
  EXPECT_DOUBLE_EQ(lagrangian(0.1, 0.2, 0.0, 2.0), total_cost(0.1, 0.2, 2.0));
}

TEST(Lagrangian, ActiveConstraintIgnoresMultiplier) {
  const auto [pro, retro] = stationary_points(2.0);
  for (double lam : {0.0, 0.3, 7.0}) {
    EXPECT_NEAR(lagrangian(0.0, pro.point.y0, lam, 2.0), pro.cost, 1e-14);
  }
}

TEST(Lagrangian, DirectArithmetic) {
  EXPECT_LT(rel_err(lagrangian(0.1, 0.2, 0.5, 2.0), lagrangian_oracle(0.1, 0.2, 0.5, 2.0)), 1e-15);
}

TEST(Lagrangian, NegativeRadicandIsDomainError) {
  // y0 + a = 0 leaves -b under the root.
  const double a = 1 - std::pow(2.0, -1.5);
  EXPECT_THROW(lagrangian(0.0, -a, 0.1, 2.0), DomainError);
}

TEST(KktResiduals, VanishAtClosedFormPoints) {
  const auto [pro, retro] = stationary_points(2.0);
  EXPECT_LT(kkt_residuals(pro.point, 2.0).max_abs(), 1e-12);
  EXPECT_LT(kkt_residuals(retro.point, 2.0).max_abs(), 1e-12);
}

TEST(KktResiduals, NoUnconstrainedStationaryPointOnAxis) {
  // With lambda = 0 and x0 = 0, stat_y = sgn(y0) + (y0 + a)/dvf stays away from 0.
  testing_support::Rng g(31);
  for (int i = 0; i < 500; ++i) {
    const double rbar = testing_support::random_ratio(g, 1.01, 100.0);
    const double y0 = testing_support::uniform(g, -3.0, 1.0);
    const auto parts = try_cost_parts(0.0, y0, rbar);
    if (!parts || parts->dv0 < 1e-6 || parts->dvf < 1e-6) continue;
    const auto r = kkt_residuals({0.0, y0, 0.0, 0.0, 0.0}, rbar);
    EXPECT_GT(std::abs(r.stat_y), 1e-3) << "rbar " << rbar << " y0 " << y0;
  }
}

TEST(KktResiduals, InfeasiblePointReportsPrimalViolation) {
  // (0, -2) at rbar 2: g = 0.75 - 1 = -0.25 while the second-impulse
  // radicand (2 - a)^2 - b stays positive.
  const auto r = kkt_residuals({0.0, -2.0, 0.2, 0.0, 0.0}, 2.0);
  EXPECT_DOUBLE_EQ(r.primal_feas, -0.25);
  EXPECT_EQ(r.dual_feas, 0.0);
  const auto neg = kkt_residuals({0.0, -2.0, -0.2, 0.0, 0.0}, 2.0);
  EXPECT_DOUBLE_EQ(neg.dual_feas, -0.2);
}

TEST(KktResiduals, DegenerateImpulse) {
  EXPECT_THROW(kkt_residuals({0.0, 0.0, 1.0, 0.0, 0.0}, 2.0), DegeneracyError);
}

TEST(KktResiduals, GradientMatchesFiniteDifferencesProperty) {
  testing_support::Rng g(32);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const auto p = testing_support::random_feasible_point(g);
    const double lam = testing_support::uniform(g, 0.0, 2.0);
    const auto r = kkt_residuals({p.x0, p.y0, lam, 0.0, 0.0}, p.rbar);
    const double fx = (lagrangian_oracle(p.x0 + h, p.y0, lam, p.rbar) -
                       lagrangian_oracle(p.x0 - h, p.y0, lam, p.rbar)) / (2 * h);
    const double fy = (lagrangian_oracle(p.x0, p.y0 + h, lam, p.rbar) -
                       lagrangian_oracle(p.x0, p.y0 - h, lam, p.rbar)) / (2 * h);
    const double scale = std::max({1.0, std::abs(fx), std::abs(fy)});
    EXPECT_LT(std::abs(r.stat_x - fx) / scale, 1e-5);
    EXPECT_LT(std::abs(r.stat_y - fy) / scale, 1e-5);
  }
}

TEST(StationaryPoints, RatioTwo) {
  const auto [pro, retro] = stationary_points(2.0);
  EXPECT_NEAR(pro.point.y0, std::sqrt(4.0 / 3.0) - 1.0, 1e-15);
  EXPECT_NEAR(pro.point.y0, 0.1547005384, 1e-10);
  EXPECT_NEAR(retro.point.y0, -std::sqrt(4.0 / 3.0) - 1.0, 1e-15);
  EXPECT_EQ(pro.kind, SolutionKind::GlobalMinimum);
  EXPECT_EQ(retro.kind, SolutionKind::LocalMinimum);
  EXPECT_GT(pro.point.lambda, 0.0);
  EXPECT_GT(retro.point.lambda, 0.0);
}

TEST(StationaryPoints, ExampleOneRetrogradeMagnitudes) {
  const double r0 = 6378145.0 + 300e3;
  const double rbar = 42164000.0 / r0;
  const double v0 = std::sqrt(3.986e14 / r0);
  const auto [pro, retro] = stationary_points(rbar);
  EXPECT_LT(rel_err(std::abs(retro.point.y0) * v0, 1.787722892643957e4), 1e-9);
  EXPECT_LT(rel_err(retro.point.yf * v0, 4.682506326686718e3), 1e-9);
}

TEST(StationaryPoints, PrintedMultiplierOnProgradeBranch) {
  for (double rbar : log_ratios(1.001, 100.0, 30)) {
    const auto [pro, retro] = stationary_points(rbar);
    EXPECT_LT(rel_err(printed_multiplier(pro.point.y0, pro.point.yf, rbar), pro.point.lambda), 1e-10);
  }
}

TEST(StationaryPoints, PrintedMultiplierMissesRetrogradeStationarity) {
  // The printed retrograde multiplier leaves stat_y = -2.
  const auto [pro, retro] = stationary_points(2.0);
  auto p = retro.point;
  p.lambda = printed_multiplier(p.y0, p.yf, 2.0);
  EXPECT_NEAR(kkt_residuals(p, 2.0).stat_y, -2.0, 1e-12);
}

TEST(StationaryPoints, RejectsRatioAtMostOne) {
  EXPECT_THROW(stationary_points(1.0), DomainError);
  EXPECT_THROW(stationary_points(0.5), DomainError);
}

TEST(StationaryPoints, SweepProperty) {
  for (double rbar : log_ratios(1.001, 100.0, 50)) {
    const auto [pro, retro] = stationary_points(rbar);
    EXPECT_LT(kkt_residuals(pro.point, rbar).max_abs(), 1e-11);
    EXPECT_LT(kkt_residuals(retro.point, rbar).max_abs(), 1e-11);
    EXPECT_LT(pro.cost, retro.cost);
    EXPECT_LT(std::abs(constraint(0.0, pro.point.y0, rbar)), 1e-12);
    EXPECT_LT(std::abs(constraint(0.0, retro.point.y0, rbar)), 1e-12);
    EXPECT_LT(rel_err(pro.cost, total_cost(0.0, pro.point.y0, rbar)), 1e-13);
  }
}

TEST(Hessian, MatchesFiniteDifferencesAtRatioTwo) {
  const auto [pro, retro] = stationary_points(2.0);
  for (const auto& c : {pro, retro}) {
    const auto h = hessian(c.point, 2.0);
    const double lam = c.point.lambda, y = c.point.y0;
    auto F = [&](double dx, double dy) { return lagrangian_oracle(dx, y + dy, lam, 2.0); };
    // One Richardson step: dvf is small at the prograde point, so the plain
    // second difference carries a large truncation error.
    auto d2 = [&](double ex, double ey, double s) {
      return (F(ex * s, ey * s) - 2 * F(0, 0) + F(-ex * s, -ey * s)) / (s * s);
    };
    auto rich = [&](double ex, double ey) { return (4 * d2(ex, ey, 5e-5) - d2(ex, ey, 1e-4)) / 3; };
    const double fxx = rich(1, 0);
    const double fyy = rich(0, 1);
    const double s = 1e-4;
    const double fxy = (F(s, s) - F(s, -s) - F(-s, s) + F(-s, -s)) / (4 * s * s);
    EXPECT_NEAR(h.fxx, fxx, 1e-6 * std::max(1.0, std::abs(fxx)));
    EXPECT_NEAR(h.fyy, fyy, 1e-6 * std::max(1.0, std::abs(fyy)));
    EXPECT_NEAR(h.fxy, fxy, 1e-6);
    EXPECT_EQ(h.fxy, 0.0);
  }
}

TEST(Hessian, HohmannPointIsIndefiniteProperty) {
  for (double rbar : log_ratios(1.001, 100.0, 50)) {
    const auto [pro, retro] = stationary_points(rbar);
    const auto h = hessian(pro.point, rbar);
    EXPECT_GT(h.fxx, 0.0);
    EXPECT_LT(h.fyy, 0.0);
    EXPECT_EQ(h.fxy, 0.0);
  }
}

TEST(Hessian, RejectsNonStationaryPoint) {
  EXPECT_THROW(hessian({0.1, 0.2, 0.5, 0.0, 0.0}, 2.0), PreconditionError);
  EXPECT_NO_THROW(hessian({0.1, 0.2, 0.5, 0.0, 0.0}, 2.0, false));
}

TEST(ProjectedHessian, ProgradePassesWithAxisTangent) {
  for (double rbar : log_ratios(1.001, 100.0, 50)) {
    const auto [pro, retro] = stationary_points(rbar);
    const auto r = projected_hessian_test(pro.point, rbar);
    EXPECT_TRUE(r.is_strict_local_min);
    EXPECT_DOUBLE_EQ(r.tangent_vector[0], 1.0);
    EXPECT_EQ(r.tangent_vector[1], 0.0);
  }
}

TEST(ProjectedHessian, RetrogradeTangentCurvatureIsNegative) {
  // Measured along the active boundary with an independent cost evaluation:
  // moving off x0 = 0 on g = 0 lowers the cost, so the retrograde KKT point
  // is not a strict constrained minimum.
  const double rbar = 2.0;
  const auto [pro, retro] = stationary_points(rbar);
  const auto r = projected_hessian_test(retro.point, rbar);
  EXPECT_FALSE(r.is_strict_local_min);
  EXPECT_LT(r.curvature, 0.0);
  const double x0 = 0.1;
  const double shrink = 1 - 1 / (rbar * rbar);
  const double h = -std::sqrt((2 * (1 - 1 / rbar) - x0 * x0) / shrink);  // 1 + y0 on g = 0
  EXPECT_LT(total_cost(x0, h - 1.0, rbar), retro.cost);
}

TEST(ProjectedHessian, SyntheticNegativeCurvatureFails) {
  const auto [pro, retro] = stationary_points(2.0);
  auto h = hessian(pro.point, 2.0);
  h.fxx = -1.0;
  EXPECT_FALSE(projected_hessian_test(pro.point, 2.0, h).is_strict_local_min);
}

TEST(ProjectedHessian, Preconditions) {
  const auto [pro, retro] = stationary_points(2.0);
  auto inactive = pro.point;
  inactive.y0 += 0.1;
  EXPECT_THROW(projected_hessian_test(inactive, 2.0, hessian(inactive, 2.0, false)), PreconditionError);
  auto zero_lambda = pro.point;
  zero_lambda.lambda = 0.0;
  EXPECT_THROW(projected_hessian_test(zero_lambda, 2.0, hessian(zero_lambda, 2.0, false)),
               PreconditionError);
}

TEST(GridOracle, CoarseGridBracketsHohmannPoint) {
  const auto [pro, retro] = stationary_points(2.0);
  const auto r = grid_search_oracle(2.0, {-1, 1}, {-3, 1}, 401);
  EXPECT_GT(r.cost, pro.cost);
  // The cost rises with slope near 7 in y0 off the boundary, so one grid
  // step of 0.01 costs a few hundredths.
  EXPECT_LT(r.cost - pro.cost, 0.05);
  EXPECT_NEAR(r.y0, pro.point.y0, 0.01);
  EXPECT_GT(r.feasible_nodes, 0u);
}

TEST(GridOracle, RestrictedToRetrogradeHalfPlane) {
  const auto [pro, retro] = stationary_points(2.0);
  const auto r = grid_search_oracle(2.0, {-1, 1}, {-3, -1.05}, 401);
  // The retrograde stationary point is a saddle on the boundary, so even a
  // coarse grid in its half-plane finds something cheaper.
  EXPECT_LT(r.cost, retro.cost);
  EXPECT_GT(r.cost, pro.cost);
}

TEST(GridOracle, CostConvergesWithSpacingProperty) {
  // Grid cost gap shrinks with the spacing.
  const auto [pro, retro] = stationary_points(2.0);
  double prev = 1.0;
  for (std::size_t n : {51u, 201u, 801u}) {
    const auto r = grid_search_oracle(2.0, {-1, 1}, {-3, 1}, n);
    const double gap = r.cost - pro.cost;
    EXPECT_GE(gap, 0.0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}

TEST(GridOracle, Errors) {
  EXPECT_THROW(grid_search_oracle(2.0, {-1e-3, 1e-3}, {-1e-3, 1e-3}, 5), EmptyResultError);
  EXPECT_THROW(grid_search_oracle(2.0, {-1, 1}, {-3, 1}, 2), DomainError);
  EXPECT_THROW(grid_search_oracle(2.0, {1, -1}, {-3, 1}, 5), DomainError);
}

TEST(GridOracle, LexicographicTieBreak) {
  // Cost is even in x0, so the symmetric pair ties; the smaller x0 wins.
  const auto r = grid_search_oracle(2.0, {-1, 1}, {-3, 1}, 101);
  if (r.x0 != 0.0) EXPECT_LT(r.x0, 0.0);
}
