#pragma once

// Shared helpers for the unit tests: relative error and small generators of
// random domain objects. Generators take the engine by reference so each test
// controls its own seed.

#include <cmath>
#include <random>

#include "hohmann/hohmann_analytic.hpp"
#include "hohmann/orbital_core.hpp"

namespace testing_support {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

using Rng = std::mt19937_64;

inline double uniform(Rng& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline hohmann::Vec3 random_unit(Rng& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  hohmann::Vec3 v(n(g), n(g), n(g));
  while (v.norm() < 1e-3) v = hohmann::Vec3(n(g), n(g), n(g));
  return v.normalized();
}

// Radius ratio, log-uniform on [lo, hi].
inline double random_ratio(Rng& g, double lo = 1.01, double hi = 100.0) {
  return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

// A bound state with |r| in [0.5, 2] R and speed below escape.
inline hohmann::CartesianState random_bound_state(Rng& g, double R, double mu) {
  hohmann::CartesianState s;
  const double r = R * uniform(g, 0.5, 2.0);
  s.r = r * random_unit(g);
  const double v_esc = std::sqrt(2.0 * mu / r);
  hohmann::Vec3 dir = random_unit(g);
  // keep the orbit away from rectilinear
  dir = (dir - 0.8 * dir.dot(s.r.normalized()) * s.r.normalized()).normalized();
  s.v = uniform(g, 0.5, 0.9) * v_esc * dir;
  return s;
}

// A feasible first impulse (x0, y0) at ratio rbar: both impulses non-zero.
struct FeasiblePoint {
  double x0, y0, rbar;
};

inline FeasiblePoint random_feasible_point(Rng& g) {
  for (;;) {
    const double rbar = random_ratio(g, 1.2, 20.0);
    const double x0 = uniform(g, -1.0, 1.0);
    const double y0 = uniform(g, -3.0, 1.0);
    const auto parts = hohmann::try_cost_parts(x0, y0, rbar);
    if (parts && parts->dv0 > 1e-3 && parts->dvf > 1e-3 &&
        hohmann::constraint(x0, y0, rbar) > 1e-3) {
      return {x0, y0, rbar};
    }
  }
}

}  // namespace testing_support
