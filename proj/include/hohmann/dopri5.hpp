#pragma once

// Embedded Dormand-Prince 5(4) integrator with PI step-size control.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hohmann/errors.hpp"

namespace hohmann::ode {

using Vector = Eigen::VectorXd;
using Rhs = std::function<Vector(double, const Vector&)>;

struct Step {
  double t;
  Vector y;
  Vector f;  // derivative at (t, y), reused for Hermite dense output
};

struct Dopri5Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects automatically
  std::size_t max_steps = 1000000;
};

struct Dopri5Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0) and returns every accepted
/// step, including the initial point. Deterministic for identical inputs.
inline std::vector<Step> dopri5(const Rhs& f, double t0, const Vector& y0, double t1,
                                const Dopri5Options& opt, Dopri5Stats* stats = nullptr) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Dopri5Stats local;
  Dopri5Stats& st = stats ? *stats : local;

  std::vector<Step> out;
  Vector k1 = f(t0, y0);
  ++st.rhs_evals;
  out.push_back({t0, y0, k1});
  if (!(t1 > t0)) return out;

  const auto n = y0.size();
  auto err_norm = [&](const Vector& e, const Vector& ya, const Vector& yb) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      s += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(s / static_cast<double>(n));
  };

  double span = t1 - t0;
  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    const double d0 = err_norm(y0, Vector::Zero(n), Vector::Zero(n));
    const double d1 = err_norm(k1, Vector::Zero(n), Vector::Zero(n));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    Vector y1 = y0 + h0 * k1;
    Vector f1 = f(t0 + h0, y1);
    ++st.rhs_evals;
    const double d2 = err_norm(f1 - k1, y0, y0) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, span});
  }

  // PI controller constants (Hairer & Wanner, DOPRI5).
  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safe = 0.9, facmin = 0.2, facmax = 10.0;
  double err_old = 1e-4;

  double t = t0;
  Vector y = y0;
  bool last = false;
  Vector k2, k3, k4, k5, k6, k7, ytmp, ynew;
  while (!last) {
    if (out.size() + st.rejected > opt.max_steps) {
      throw PropagationError("dopri5: maximum number of steps exceeded");
    }
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h <= 1e-14 * std::max(1.0, std::abs(t)) * 16.0) {
      throw PropagationError("dopri5: step size underflow at t = " + std::to_string(t));
    }
    ytmp = y + h * a21 * k1;
    k2 = f(t + c2 * h, ytmp);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    k3 = f(t + c3 * h, ytmp);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    k4 = f(t + c4 * h, ytmp);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    k5 = f(t + c5 * h, ytmp);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    k6 = f(t + h, ytmp);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7 = f(t + h, ynew);
    st.rhs_evals += 6;

    const Vector e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = err_norm(e, y, ynew);
    if (!std::isfinite(err)) {
      throw PropagationError("dopri5: non-finite error estimate at t = " + std::to_string(t));
    }

    if (err <= 1.0) {
      const double fac11 = std::pow(std::max(err, 1e-16), expo1);
      double fac = fac11 / std::pow(err_old, beta);
      fac = std::clamp(fac / safe, 1.0 / facmax, 1.0 / facmin);
      err_old = std::max(err, 1e-4);
      t = last ? t1 : t + h;
      y = ynew;
      k1 = k7;
      out.push_back({t, y, k1});
      ++st.accepted;
      h = h / fac;
    } else {
      const double fac11 = std::pow(err, expo1);
      h = h / std::min(1.0 / facmin, fac11 / safe);
      last = false;
      ++st.rejected;
    }
  }
  return out;
}

/// Cubic Hermite interpolation on [a, b] from endpoint values and slopes.
inline Vector hermite(double t, const Step& a, const Step& b) {
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * a.y + h10 * h * a.f + h01 * b.y + h11 * h * b.f;
}

}  // namespace hohmann::ode
