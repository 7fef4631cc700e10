#pragma once

// Two-body dynamics, conserved quantities and adaptive propagation.

#include <Eigen/Core>
#include <vector>

namespace hohmann {

using Vec3 = Eigen::Vector3d;

/// Central gravity field. Invariant: mu > 0.
class GravField {
 public:
  explicit GravField(double mu);
  double mu() const noexcept { return mu_; }

 private:
  double mu_;
};

/// Earth values used throughout the worked examples.
inline constexpr double kEarthMu = 3.986e14;
inline constexpr double kEarthRadius = 6378145.0;

struct CartesianState {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

struct StateDerivative {
  Vec3 r_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
};

struct ConservedQuantities {
  Vec3 h_vec = Vec3::Zero();
  double energy = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  CartesianState state;
};

/// Time-ordered samples with strictly increasing times.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectorySample> samples);

  const std::vector<TrajectorySample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const TrajectorySample& front() const { return samples_.front(); }
  const TrajectorySample& back() const { return samples_.back(); }

  /// Cubic Hermite interpolation between bracketing samples; requires the
  /// derivative field to reconstruct slopes.
  CartesianState interpolate(double t, const GravField& field) const;

 private:
  std::vector<TrajectorySample> samples_;
};

double circular_velocity(double radius, const GravField& field);

StateDerivative two_body_rhs(const CartesianState& state, const GravField& field);

ConservedQuantities conserved(const CartesianState& state, const GravField& field);

/// Adaptive Dormand-Prince 5(4) propagation with PI step control.
/// `tol` is the relative local error target, in (0, 1e-3].
Trajectory propagate(const CartesianState& state0, const GravField& field, double duration,
                     double tol);

}  // namespace hohmann
