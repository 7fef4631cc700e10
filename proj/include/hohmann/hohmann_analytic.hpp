#pragma once

// Nondimensional two-impulse transfer algebra between coplanar circular
// orbits, and closed-form Hohmann plans.
//
// Scaled variables use the initial orbit as reference: lengths by r0 and
// speeds by V0 = sqrt(mu / r0). (x, y) are the radial and transverse impulse
// components, so the post-impulse velocity at the initial point is (x0, 1 + y0).

#include <optional>

#include "hohmann/orbital_core.hpp"

namespace hohmann {

struct NondimTransfer {
  double rbar_f = 0.0;  // rf / r0
  double x0 = 0.0;
  double y0 = 0.0;
  double xf = 0.0;
  double yf = 0.0;
  double vf_bar = 0.0;  // rbar_f^{-1/2}
};

struct ImpulsivePlan {
  Vec3 dv0 = Vec3::Zero();
  Vec3 dv1 = Vec3::Zero();
  double t_impulse_1 = 0.0;
  double total_cost = 0.0;
};

struct SecondImpulse {
  double yf = 0.0;
  double xf_squared = 0.0;  // negative when the transfer cannot reach the outer circle
};

/// Shape constants of the second-impulse radicand:
/// dvf^2 = x0^2 + (y0 + a)^2 - b.
struct CostShape {
  double a = 0.0;  // 1 - rbar^{-3/2}
  double b = 0.0;  // (rbar - 1)^2 (2 rbar + 1) rbar^{-3}
};
CostShape cost_shape(double rbar_f);

SecondImpulse reconstruct_second_impulse(double x0, double y0, double rbar_f);

/// g(x0, y0) >= 0 iff the transfer orbit meets both circles.
double constraint(double x0, double y0, double rbar_f);

/// Scaled impulse magnitudes; nullopt when the point is infeasible or the
/// second radicand is negative. Used by hot loops that must not throw.
struct CostParts {
  double dv0 = 0.0;
  double dvf = 0.0;
  double total() const { return dv0 + dvf; }
};
std::optional<CostParts> try_cost_parts(double x0, double y0, double rbar_f);

/// Characteristic velocity dv0 + dvf in units of V0. Throws FeasibilityError.
double total_cost(double x0, double y0, double rbar_f);

/// Builds the full nondimensional description (xf taken >= 0 by convention).
NondimTransfer make_transfer(double x0, double y0, double rbar_f);

ImpulsivePlan hohmann_plan(double r0, double rf, const GravField& field);

/// Half period of the ellipse with semi-major axis (r0 + rf) / 2. Accepts r0 == rf.
double transfer_time(double r0, double rf, const GravField& field);

/// Inertial impulse vectors for a transfer starting at angle `initial_phase_angle`
/// in the x-y plane. The second impulse is placed at the antipodal apse point
/// (half a transfer-ellipse period later), where the local horizontal is
/// reversed; its radial component is taken along the outward radius.
ImpulsivePlan dimensionalize(const NondimTransfer& nd, double r0, const GravField& field,
                             double initial_phase_angle = 0.0);

}  // namespace hohmann
