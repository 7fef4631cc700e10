#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hohmann/errors.hpp"
#include "hohmann/hohmann_analytic.hpp"
#include "hohmann/kkt_solver.hpp"
#include "support.hpp"

using namespace hohmann;
using testing_support::rel_err;

namespace {
const GravField earth(kEarthMu);
constexpr double kRe = 6378145.0;
const double kEx2R0 = kRe + 200e3;
const double kEx2Rf = kRe + 400e3;
const double kEx1R0 = kRe + 300e3;
constexpr double kEx1Rf = 42164000.0;

// Independent closed form for the prograde first impulse.
double hohmann_y0(double rbar) { return std::sqrt(2 * rbar / (1 + rbar)) - 1; }
}  // namespace

TEST(ReconstructSecondImpulse, SameOrbitDegenerate) {
  const auto si = reconstruct_second_impulse(0.0, 0.0, 1.0);
  EXPECT_EQ(si.yf, 0.0);
  EXPECT_EQ(si.xf_squared, 0.0);
}

TEST(ReconstructSecondImpulse, HohmannTangency) {
  const auto si = reconstruct_second_impulse(0.0, std::sqrt(4.0 / 3.0) - 1.0, 2.0);
  EXPECT_LT(std::abs(si.xf_squared), 1e-15);
}

TEST(ReconstructSecondImpulse, InnerCircleCannotReachOuter) {
  const auto si = reconstruct_second_impulse(0.0, 0.0, 2.0);
  // -2 (1 - 1/2) + (1 - 1/4)
  EXPECT_DOUBLE_EQ(si.xf_squared, -0.25);
  EXPECT_LT(si.xf_squared, 0.0);
}

TEST(ReconstructSecondImpulse, MomentumIdentityProperty) {
  testing_support::Rng g(21);
  for (int i = 0; i < 500; ++i) {
    const double rbar = testing_support::random_ratio(g);
    const double x0 = testing_support::uniform(g, -1, 1);
    const double y0 = testing_support::uniform(g, -3, 1);
    const auto si = reconstruct_second_impulse(x0, y0, rbar);
    const double vf = 1.0 / std::sqrt(rbar);
    EXPECT_NEAR(1.0 + y0, rbar * (vf - si.yf), 1e-13 * std::max(1.0, rbar));
  }
}

TEST(ReconstructSecondImpulse, RejectsRatioBelowOne) {
  EXPECT_THROW(reconstruct_second_impulse(0, 0, 0.5), DomainError);
}

TEST(Constraint, Values) {
  EXPECT_DOUBLE_EQ(constraint(0.0, 0.0, 2.0), -0.25);
  // rbar = 1 reduces to x0^2
  EXPECT_DOUBLE_EQ(constraint(0.3, -0.7, 1.0), 0.09);
  EXPECT_GE(constraint(0.0, 0.4, 1.0), 0.0);
}

TEST(Constraint, ActiveAtHohmannPointProperty) {
  testing_support::Rng g(22);
  for (int i = 0; i < 200; ++i) {
    const double rbar = testing_support::random_ratio(g, 1.0001, 100.0);
    EXPECT_LT(std::abs(constraint(0.0, hohmann_y0(rbar), rbar)), 1e-14);
  }
}

TEST(TotalCost, HohmannPointAtRatioTwo) {
  // Oracle: |y0*| + |yf*| with yf* from the momentum match.
  const double y0 = hohmann_y0(2.0);
  const double yf = 1 / std::sqrt(2.0) - (1 + y0) / 2.0;
  const double want = y0 + std::abs(yf);
  EXPECT_LT(rel_err(total_cost(0.0, y0, 2.0), want), 1e-14);
  EXPECT_NEAR(total_cost(0.0, y0, 2.0), 0.284457, 1e-6);
}

TEST(TotalCost, EvenInX0Property) {
  testing_support::Rng g(23);
  for (int i = 0; i < 200; ++i) {
    const auto p = testing_support::random_feasible_point(g);
    EXPECT_DOUBLE_EQ(total_cost(p.x0, p.y0, p.rbar), total_cost(-p.x0, p.y0, p.rbar));
  }
}

TEST(TotalCost, EqualsComponentNormsProperty) {
  // Second impulse from energy/momentum matching, computed independently.
  testing_support::Rng g(24);
  for (int i = 0; i < 200; ++i) {
    const auto p = testing_support::random_feasible_point(g);
    const auto si = reconstruct_second_impulse(p.x0, p.y0, p.rbar);
    const double want = std::hypot(p.x0, p.y0) + std::hypot(std::sqrt(si.xf_squared), si.yf);
    EXPECT_LT(rel_err(total_cost(p.x0, p.y0, p.rbar), want), 1e-12);
  }
}

TEST(TotalCost, Errors) {
  try {
    total_cost(0.0, 0.0, 2.0);
    FAIL() << "expected FeasibilityError";
  } catch (const FeasibilityError& e) {
    EXPECT_DOUBLE_EQ(e.constraint_value(), -0.25);
  }
  EXPECT_THROW(total_cost(0.0, 0.0, 1.0), DomainError);
}

TEST(TotalCost, ExampleOneMagnitudes) {
  const double rbar = kEx1Rf / kEx1R0;
  const double v0 = circular_velocity(kEx1R0, earth);
  const auto parts = try_cost_parts(0.0, hohmann_y0(rbar), rbar);
  ASSERT_TRUE(parts.has_value());
  EXPECT_LT(rel_err(parts->dv0 * v0, 2.425726280326563e+03), 1e-12);
  EXPECT_LT(rel_err(parts->dvf * v0, 1.466822833675619e+03), 1e-12);
}

TEST(HohmannPlan, ExampleTwo) {
  const auto plan = hohmann_plan(kEx2R0, kEx2Rf, earth);
  EXPECT_LT(rel_err(plan.dv0.norm(), 58.064987253967857), 1e-12);
  EXPECT_LT(rel_err(plan.dv1.norm(), 57.631827424189602), 1e-12);
  EXPECT_EQ(plan.dv0.x(), 0.0);
  EXPECT_EQ(plan.dv1.x(), 0.0);
  EXPECT_GT(plan.dv0.y(), 0.0);
  EXPECT_LT(plan.dv1.y(), 0.0);  // prograde at the antipodal apse
  EXPECT_DOUBLE_EQ(plan.total_cost, plan.dv0.norm() + plan.dv1.norm());
}

TEST(HohmannPlan, ExampleOne) {
  const auto plan = hohmann_plan(kEx1R0, kEx1Rf, earth);
  EXPECT_LT(rel_err(plan.dv0.norm(), 2.425726280326563e+03), 1e-12);
  EXPECT_LT(rel_err(plan.dv1.norm(), 1.466822833675619e+03), 1e-12);
}

TEST(HohmannPlan, VanishesAsOrbitsMerge) {
  const auto plan = hohmann_plan(kEx2R0, kEx2R0 * (1 + 1e-10), earth);
  EXPECT_LT(plan.dv0.norm(), 1e-5);
  EXPECT_LT(plan.dv1.norm(), 1e-5);
}

TEST(HohmannPlan, RejectsDescendingTransfers) {
  EXPECT_THROW(hohmann_plan(kEx2Rf, kEx2R0, earth), DomainError);
  EXPECT_THROW(hohmann_plan(kEx2R0, kEx2R0, earth), DomainError);
  EXPECT_THROW(hohmann_plan(0.0, kEx2R0, earth), DomainError);
}

TEST(HohmannPlan, CostMatchesClosedFormProperty) {
  testing_support::Rng g(25);
  for (int i = 0; i < 100; ++i) {
    const double r0 = testing_support::uniform(g, 6.5e6, 3e7);
    const double rf = r0 * testing_support::random_ratio(g, 1.001, 100.0);
    const double v0 = circular_velocity(r0, earth);
    const auto [pro, retro] = kkt::stationary_points(rf / r0);
    EXPECT_LT(rel_err(hohmann_plan(r0, rf, earth).total_cost, pro.cost * v0), 1e-13);
  }
}

TEST(TransferTime, ExampleTwo) {
  EXPECT_LT(rel_err(transfer_time(kEx2R0, kEx2Rf, earth), 2.715594949192177e+03), 1e-12);
}

TEST(TransferTime, CircularLimitIsHalfPeriod) {
  const double R = 7e6;
  EXPECT_LT(rel_err(transfer_time(R, R, earth), std::numbers::pi * std::sqrt(R * R * R / kEarthMu)),
            1e-15);
}

TEST(TransferTime, MatchesPropagatedApoapsis) {
  // Oracle: a propagated Hohmann coast reaches rf with zero radial speed.
  const auto plan = hohmann_plan(kEx1R0, kEx1Rf, earth);
  const CartesianState s0{Vec3(kEx1R0, 0, 0),
                          Vec3(0, circular_velocity(kEx1R0, earth), 0) + plan.dv0};
  const auto tr = propagate(s0, earth, plan.t_impulse_1, 1e-12);
  EXPECT_LT(rel_err(tr.back().state.r.norm(), kEx1Rf), 1e-9);
  // Entering the circle with dv1 leaves a circular state.
  const Vec3 v_after = tr.back().state.v + plan.dv1;
  EXPECT_LT(rel_err(v_after.norm(), circular_velocity(kEx1Rf, earth)), 1e-9);
}

TEST(TransferTime, Errors) {
  EXPECT_THROW(transfer_time(2.0, 1.0, earth), DomainError);
  EXPECT_THROW(transfer_time(0.0, 1.0, earth), DomainError);
}

TEST(Dimensionalize, HohmannExampleTwoAtPhaseZero) {
  const double rbar = kEx2Rf / kEx2R0;
  const auto plan = dimensionalize(make_transfer(0.0, hohmann_y0(rbar), rbar), kEx2R0, earth);
  EXPECT_EQ(plan.dv0.x(), 0.0);
  EXPECT_LT(rel_err(plan.dv0.y(), 58.064987253970472), 1e-12);
  EXPECT_EQ(plan.dv0.z(), 0.0);
  EXPECT_LT(rel_err(plan.dv1.norm(), 57.631827424189602), 1e-12);
  EXPECT_LT(rel_err(plan.t_impulse_1, transfer_time(kEx2R0, kEx2Rf, earth)), 1e-12);
}

TEST(Dimensionalize, ZeroFirstImpulse) {
  const auto plan = dimensionalize(make_transfer(0.0, 0.0, 1.0), kEx2R0, earth);
  EXPECT_EQ(plan.dv0.norm(), 0.0);
}

TEST(Dimensionalize, RetrogradeExampleOne) {
  const double rbar = kEx1Rf / kEx1R0;
  const double y0 = -std::sqrt(2 * rbar / (1 + rbar)) - 1;
  const auto plan = dimensionalize(make_transfer(0.0, y0, rbar), kEx1R0, earth);
  EXPECT_LT(rel_err(plan.dv0.y(), -1.787722892643957e4), 1e-9);
}

TEST(Dimensionalize, RejectsInfeasible) {
  EXPECT_THROW(dimensionalize(make_transfer(0.0, 0.0, 2.0), kEx2R0, earth), FeasibilityError);
}

TEST(Dimensionalize, ConservationRoundTripProperty) {
  // Impulse vectors from dimensionalize, checked against a propagation of the
  // post-impulse state: the coast must hit the outer circle at t_impulse_1
  // and the second impulse must leave a circular orbit.
  testing_support::Rng g(26);
  for (int i = 0; i < 20; ++i) {
    const auto p = testing_support::random_feasible_point(g);
    if (1.0 + p.y0 <= 0.05) continue;
    const double r0 = 7e6;
    const double phase = testing_support::uniform(g, -3, 3);
    const auto plan = dimensionalize(make_transfer(p.x0, p.y0, p.rbar), r0, earth, phase);
    const Vec3 r(r0 * std::cos(phase), r0 * std::sin(phase), 0);
    const Vec3 v = circular_velocity(r0, earth) * Vec3(-std::sin(phase), std::cos(phase), 0);
    const CartesianState s0{r, v + plan.dv0};
    const auto c0 = conserved(s0, earth);
    const auto tr = propagate(s0, earth, plan.t_impulse_1, 1e-12);
    const auto c1 = conserved(tr.back().state, earth);
    EXPECT_LT((c1.h_vec - c0.h_vec).norm() / c0.h_vec.norm(), 1e-9);
    EXPECT_LT(rel_err(tr.back().state.r.norm(), p.rbar * r0), 1e-8);
    const CartesianState after{tr.back().state.r, tr.back().state.v + plan.dv1};
    const auto cf = conserved(after, earth);
    EXPECT_LT(rel_err(cf.energy, -kEarthMu / (2 * p.rbar * r0)), 1e-8);
    EXPECT_LT(rel_err(cf.h_vec.norm(), std::sqrt(kEarthMu * p.rbar * r0)), 1e-8);
  }
}
