#include "hohmann/hohmann_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hohmann/errors.hpp"

namespace hohmann {

namespace {

// Points built on g = 0 (the Hohmann and retrograde stationary points) land a
// few ulps either side of it.
constexpr double kBoundarySlack = 1e-12;

void require_ratio_at_least_one(double rbar_f) {
  if (!(rbar_f >= 1.0) || !std::isfinite(rbar_f)) {
    throw DomainError("radius ratio must be >= 1, got " + std::to_string(rbar_f));
  }
}

void require_ascending(double r0, double rf) {
  if (!(r0 > 0.0)) throw DomainError("initial radius must be positive");
  if (!(rf > r0)) {
    throw DomainError("only ascending transfers (rf > r0) are supported");
  }
}

// Time of flight from true anomaly nu0 to nu1 (nu1 > nu0) on a conic with
// semi-latus rectum p and eccentricity e, mu = 1.
double conic_flight_time(double p, double e, double nu0, double nu1) {
  if (std::abs(e - 1.0) < 1e-12) {
    // Barker's equation.
    auto barker = [&](double nu) {
      const double d = std::tan(0.5 * nu);
      return 0.5 * std::sqrt(p * p * p) * (d + d * d * d / 3.0);
    };
    return barker(nu1) - barker(nu0);
  }
  if (e < 1.0) {
    const double a = p / (1.0 - e * e);
    const double n = std::sqrt(1.0 / (a * a * a));
    auto mean_anomaly = [&](double nu) {
      // Continuous in nu: count full turns separately.
      const double turns = std::floor((nu + std::numbers::pi) / (2.0 * std::numbers::pi));
      const double nu_w = nu - 2.0 * std::numbers::pi * turns;
      const double ecc = 2.0 * std::atan(std::sqrt((1.0 - e) / (1.0 + e)) * std::tan(0.5 * nu_w));
      return ecc - e * std::sin(ecc) + 2.0 * std::numbers::pi * turns;
    };
    return (mean_anomaly(nu1) - mean_anomaly(nu0)) / n;
  }
  const double a = p / (e * e - 1.0);
  const double n = std::sqrt(1.0 / (a * a * a));
  auto mean_anomaly = [&](double nu) {
    const double hyp = 2.0 * std::atanh(std::sqrt((e - 1.0) / (e + 1.0)) * std::tan(0.5 * nu));
    return e * std::sinh(hyp) - hyp;
  };
  return (mean_anomaly(nu1) - mean_anomaly(nu0)) / n;
}

}  // namespace

CostShape cost_shape(double rbar_f) {
  return {1.0 - std::pow(rbar_f, -1.5),
          (rbar_f - 1.0) * (rbar_f - 1.0) * (2.0 * rbar_f + 1.0) / (rbar_f * rbar_f * rbar_f)};
}

SecondImpulse reconstruct_second_impulse(double x0, double y0, double rbar_f) {
  require_ratio_at_least_one(rbar_f);
  const double h = 1.0 + y0;
  return {1.0 / std::sqrt(rbar_f) - h / rbar_f, constraint(x0, y0, rbar_f)};
}

double constraint(double x0, double y0, double rbar_f) {
  require_ratio_at_least_one(rbar_f);
  const double h = 1.0 + y0;
  return x0 * x0 + h * h * (1.0 - 1.0 / (rbar_f * rbar_f)) - 2.0 * (1.0 - 1.0 / rbar_f);
}

std::optional<CostParts> try_cost_parts(double x0, double y0, double rbar_f) {
  if (!(rbar_f >= 1.0)) return std::nullopt;
  const double h = 1.0 + y0;
  const double g = x0 * x0 + h * h * (1.0 - 1.0 / (rbar_f * rbar_f)) - 2.0 * (1.0 - 1.0 / rbar_f);
  if (g < -kBoundarySlack) return std::nullopt;
  const CostShape s = cost_shape(rbar_f);
  const double rad = x0 * x0 + (y0 + s.a) * (y0 + s.a) - s.b;
  if (rad < 0.0) return std::nullopt;
  return CostParts{std::hypot(x0, y0), std::sqrt(rad)};
}

double total_cost(double x0, double y0, double rbar_f) {
  require_ratio_at_least_one(rbar_f);
  const double g = constraint(x0, y0, rbar_f);
  if (g < -kBoundarySlack) {
    throw FeasibilityError("transfer orbit does not reach the final circle (g = " +
                               std::to_string(g) + ")",
                           g);
  }
  if (x0 == 0.0 && y0 == 0.0) {
    throw DomainError("total_cost: first impulse must be non-zero");
  }
  const auto parts = try_cost_parts(x0, y0, rbar_f);
  if (!parts) throw FeasibilityError("second-impulse radicand is negative", g);
  return parts->total();
}

NondimTransfer make_transfer(double x0, double y0, double rbar_f) {
  const SecondImpulse si = reconstruct_second_impulse(x0, y0, rbar_f);
  NondimTransfer nd;
  nd.rbar_f = rbar_f;
  nd.x0 = x0;
  nd.y0 = y0;
  nd.yf = si.yf;
  // First crossing of the outer circle is outbound, so the arrival radial
  // velocity -xf is non-negative.
  nd.xf = si.xf_squared > 0.0 ? -std::sqrt(si.xf_squared) : 0.0;
  nd.vf_bar = 1.0 / std::sqrt(rbar_f);
  return nd;
}

ImpulsivePlan hohmann_plan(double r0, double rf, const GravField& field) {
  require_ascending(r0, rf);
  const double rbar = rf / r0;
  const double v0 = circular_velocity(r0, field);
  const double vf = circular_velocity(rf, field);
  const double dv0 = v0 * (std::sqrt(2.0 * rbar / (1.0 + rbar)) - 1.0);
  const double dv1 = vf * (1.0 - std::sqrt(2.0 / (1.0 + rbar)));
  ImpulsivePlan plan;
  plan.dv0 = Vec3(0.0, dv0, 0.0);
  // Apoapsis lies at (-rf, 0, 0), where the prograde horizontal is -y.
  plan.dv1 = Vec3(0.0, -dv1, 0.0);
  plan.t_impulse_1 = transfer_time(r0, rf, field);
  plan.total_cost = dv0 + dv1;
  return plan;
}

double transfer_time(double r0, double rf, const GravField& field) {
  if (!(r0 > 0.0)) throw DomainError("initial radius must be positive");
  if (!(rf >= r0)) throw DomainError("only ascending transfers (rf >= r0) are supported");
  const double a = 0.5 * (r0 + rf);
  return std::numbers::pi * std::sqrt(a * a * a / field.mu());
}

ImpulsivePlan dimensionalize(const NondimTransfer& nd, double r0, const GravField& field,
                             double initial_phase_angle) {
  if (!(r0 > 0.0)) throw DomainError("initial radius must be positive");
  const double g = constraint(nd.x0, nd.y0, nd.rbar_f);
  if (g < -kBoundarySlack) throw FeasibilityError("cannot dimensionalize an infeasible transfer", g);

  const double v0 = circular_velocity(r0, field);
  const double time_unit = r0 / v0;
  const double th0 = initial_phase_angle;
  const Vec3 rhat0(std::cos(th0), std::sin(th0), 0.0);
  const Vec3 that0(-std::sin(th0), std::cos(th0), 0.0);

  ImpulsivePlan plan;
  plan.dv0 = v0 * (nd.x0 * rhat0 + nd.y0 * that0);

  // Transfer conic in scaled units (mu = 1, r0 = 1); angles are measured in
  // the direction of motion.
  const double h = 1.0 + nd.y0;
  const double habs = std::abs(h);
  double arrival_angle = th0;
  double flight_time = 0.0;
  if (habs > 0.0 && nd.rbar_f > 1.0) {
    const double p = h * h;
    const double ecos0 = p - 1.0;
    const double esin0 = nd.x0 * habs;
    const double e = std::hypot(ecos0, esin0);
    const double nu0 = std::atan2(esin0, ecos0);
    const double cos_nu1 = std::clamp((p / nd.rbar_f - 1.0) / e, -1.0, 1.0);
    const double nu1 = std::acos(cos_nu1);
    const double sweep = nu1 - nu0;
    arrival_angle = th0 + (h > 0.0 ? sweep : -sweep);
    flight_time = conic_flight_time(p, e, nu0, nu1) * time_unit;
  }
  const Vec3 rhat1(std::cos(arrival_angle), std::sin(arrival_angle), 0.0);
  const Vec3 that1(-std::sin(arrival_angle), std::cos(arrival_angle), 0.0);
  plan.dv1 = v0 * (nd.xf * rhat1 + nd.yf * that1);
  plan.t_impulse_1 = flight_time;
  plan.total_cost = plan.dv0.norm() + plan.dv1.norm();
  return plan;
}

}  // namespace hohmann
