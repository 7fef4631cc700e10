#include "hohmann/orbital_core.hpp"

#include <algorithm>
#include <Eigen/Geometry>
#include <cmath>
#include <string>

#include "hohmann/dopri5.hpp"
#include "hohmann/errors.hpp"

namespace hohmann {

namespace {

constexpr double kMinRadius = 1e-300;

double checked_norm(const Vec3& r) {
  const double n = r.norm();
  if (!(n > kMinRadius) || !std::isfinite(n)) {
    throw SingularityError("two-body dynamics evaluated at |r| = 0");
  }
  return n;
}

}  // namespace

GravField::GravField(double mu) : mu_(mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("gravitational parameter must be positive, got " + std::to_string(mu));
  }
}

Trajectory::Trajectory(std::vector<TrajectorySample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw PreconditionError("trajectory needs at least one sample");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw PreconditionError("trajectory times must be strictly increasing");
    }
  }
}

CartesianState Trajectory::interpolate(double t, const GravField& field) const {
  if (samples_.size() == 1 || t <= samples_.front().t) return samples_.front().state;
  if (t >= samples_.back().t) return samples_.back().state;
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double x, const TrajectorySample& s) { return x < s.t; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  auto pack = [&](const TrajectorySample& s) {
    const StateDerivative d = two_body_rhs(s.state, field);
    ode::Vector y(6), f(6);
    y << s.state.r, s.state.v;
    f << d.r_dot, d.v_dot;
    return ode::Step{s.t, y, f};
  };
  const ode::Vector y = ode::hermite(t, pack(a), pack(b));
  return {y.head<3>(), y.tail<3>()};
}

double circular_velocity(double radius, const GravField& field) {
  if (!(radius > 0.0)) {
    throw DomainError("circular_velocity: radius must be positive, got " + std::to_string(radius));
  }
  return std::sqrt(field.mu() / radius);
}

StateDerivative two_body_rhs(const CartesianState& state, const GravField& field) {
  const double rn = checked_norm(state.r);
  return {state.v, -field.mu() / (rn * rn * rn) * state.r};
}

ConservedQuantities conserved(const CartesianState& state, const GravField& field) {
  const double rn = checked_norm(state.r);
  return {state.r.cross(state.v), 0.5 * state.v.squaredNorm() - field.mu() / rn};
}

Trajectory propagate(const CartesianState& state0, const GravField& field, double duration,
                     double tol) {
  if (!(tol > 0.0 && tol <= 1e-3)) {
    throw DomainError("propagate: tol must lie in (0, 1e-3]");
  }
  if (duration < 0.0) throw DomainError("propagate: duration must be non-negative");
  const double length = checked_norm(state0.r);
  if (duration == 0.0) return Trajectory({{0.0, state0}});

  // Integrate in units of |r0| and sqrt(|r0|^3/mu), so mu = 1.
  const double time_unit = std::sqrt(length * length * length / field.mu());
  const double speed_unit = length / time_unit;

  ode::Vector y0(6);
  y0 << state0.r / length, state0.v / speed_unit;
  const ode::Rhs rhs = [](double, const ode::Vector& y) {
    const Vec3 r = y.head<3>();
    const double rn = checked_norm(r);
    ode::Vector d(6);
    d << y.tail<3>(), -r / (rn * rn * rn);
    return d;
  };
  ode::Dopri5Options opt;
  // The controller bounds local error; a tenth of the request keeps the
  // accumulated drift of the first integrals within 10 * tol.
  opt.rtol = 0.1 * tol;
  opt.atol = 0.1 * tol;
  const auto steps = ode::dopri5(rhs, 0.0, y0, duration / time_unit, opt);

  std::vector<TrajectorySample> samples;
  samples.reserve(steps.size());
  for (const auto& s : steps) {
    samples.push_back(
        {s.t * time_unit, {s.y.head<3>() * length, Vec3(s.y.tail<3>()) * speed_unit}});
  }
  samples.back().t = duration;
  return Trajectory(std::move(samples));
}

}  // namespace hohmann
