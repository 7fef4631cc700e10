#pragma once

// Multi-phase boundary-value solver with unknown parameters.
//
// Every phase is posed on its own scaled interval s in [0, 1] and discretised
// by 3-stage Lobatto IIIA collocation (Simpson's rule with a cubic Hermite
// continuous extension), the scheme behind bvp4c-class solvers. Phases are
// coupled only through the user boundary residual. The nonlinear collocation
// system is solved with damped Newton on a sparse Jacobian, and the mesh is
// adapted until the relative ODE residual of the continuous extension meets
// the tolerance.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hohmann/errors.hpp"

namespace hohmann::bvp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct Phase {
  std::size_t dimension = 0;
  /// f(s, y, params) on the phase's unit interval. Must be pure.
  std::function<Vector(double, const Vector&, const Vector&)> rhs;
  /// Optional analytic Jacobian: fills df/dy (d x d) and df/dp (d x n_params).
  /// Forward differences are used when empty.
  std::function<void(double, const Vector&, const Vector&, Matrix&, Matrix&)> jacobian;
};

struct BvpProblem {
  std::vector<Phase> phases;
  std::size_t n_params = 0;
  /// Residual from the left (s = 0) and right (s = 1) endpoint states of every
  /// phase and the parameters. Length must equal residual_dimension().
  std::function<Vector(const std::vector<Vector>& left, const std::vector<Vector>& right,
                       const Vector& params)>
      boundary_residual;

  std::size_t residual_dimension() const;
};

struct PhaseGuess {
  std::vector<double> mesh;   // strictly increasing, spans [0, 1]
  std::vector<Vector> states; // one per mesh node
};

struct BvpGuess {
  std::vector<PhaseGuess> phases;
  Vector params;
};

/// Samples `profile` on `mesh` for one phase.
PhaseGuess sample_guess(std::vector<double> mesh, const std::function<Vector(double)>& profile);

/// n uniformly spaced nodes on [0, 1].
std::vector<double> uniform_mesh(std::size_t n);

struct SolverOptions {
  double tol = 1e-6;             // relative residual target, in [1e-12, 1e-3]
  std::size_t max_nodes = 50000; // per phase
  bool adapt = true;             // false: solve on the guess mesh only
  std::size_t max_refinements = 40;
  std::size_t max_newton_iterations = 60;
  double damping_floor = 1e-4;
  std::size_t max_lm_iterations = 2000;  // least-squares fallback when Newton stalls
  double lm_target = 1e-8;               // |F|_inf at which the fallback hands back
  int verbosity = 0;             // > 0 writes diagnostic lines to `log`
  std::ostream* log = nullptr;
};

struct Diagnostics {
  std::size_t ode_evals = 0;
  std::size_t bc_evals = 0;
  std::size_t newton_iters = 0;
  std::size_t lm_iters = 0;
  std::size_t refinements = 0;
};

struct PhaseSolution {
  std::vector<double> mesh;
  std::vector<Vector> states;
  std::vector<Vector> slopes;  // rhs at the nodes

  /// Continuous collocation extension at s.
  Vector eval(double s) const;
};

struct BvpSolution {
  std::vector<PhaseSolution> phases;
  Vector params;
  double max_residual = 0.0;     // largest interval ODE residual
  double max_bc_residual = 0.0;  // largest boundary residual component
  bool converged = false;
  Diagnostics diagnostics;

  std::size_t total_nodes() const;
};

enum class FailureKind { Newton, MeshOverflow, RefinementLimit };

/// Raised by solve(); carries the last iterate so callers can still report it.
class BvpFailure : public NonconvergenceError {
 public:
  BvpFailure(const std::string& what, FailureKind kind, BvpSolution last)
      : NonconvergenceError(what), kind_(kind), last_(std::move(last)) {}
  FailureKind kind() const noexcept { return kind_; }
  const BvpSolution& last_iterate() const noexcept { return last_; }

 private:
  FailureKind kind_;
  BvpSolution last_;
};

/// Solves the BVP. Throws BvpFailure on Newton failure, node-budget overflow
/// or when the refinement budget runs out.
BvpSolution solve(const BvpProblem& problem, const BvpGuess& guess, const SolverOptions& options);

// ---------------------------------------------------------------------------
// Building blocks, exposed for testing.

/// A square nonlinear system F(x) = 0 with a sparse Jacobian.
class NonlinearSystem {
 public:
  virtual ~NonlinearSystem() = default;
  virtual Vector residual(const Vector& x) = 0;
  virtual SparseMatrix jacobian(const Vector& x) = 0;
};

struct NewtonStep {
  Vector x;                // next iterate
  Vector step;             // full Newton correction at the old iterate
  double damping = 1.0;    // accepted damping factor
  double residual_norm = 0.0;  // |F(x_next)|_inf
};

/// One damped Newton step with natural-level backtracking. Throws
/// NonconvergenceError when the Jacobian is singular or damping drops
/// below `damping_floor`.
NewtonStep newton_step(NonlinearSystem& system, const Vector& x, double damping_floor = 1e-4);

struct NewtonResult {
  Vector x;
  std::size_t iterations = 0;
  double residual_norm = 0.0;
};

/// Iterates newton_step until the scaled correction falls below `step_tol`.
NewtonResult newton_solve(NonlinearSystem& system, Vector x, double step_tol,
                          std::size_t max_iterations, double damping_floor = 1e-4);

struct LmResult {
  Vector x;
  std::size_t iterations = 0;
  double residual_norm = 0.0;
};

/// Levenberg-Marquardt descent on |F|^2 with Marquardt diagonal scaling. Stops
/// at |F|_inf <= target, at the iteration budget, or when no step decreases
/// the merit. Never throws on stagnation; callers check residual_norm.
LmResult levenberg_marquardt(NonlinearSystem& system, Vector x, double target,
                             std::size_t max_iterations);

/// Relative ODE residual of the continuous extension on each mesh interval,
/// one vector per phase.
std::vector<Vector> estimate_residual(const BvpProblem& problem,
                                      const std::vector<PhaseSolution>& phases,
                                      const Vector& params, std::size_t* ode_evals = nullptr);

/// Splits intervals whose residual exceeds `tol` (into three above 100 tol,
/// otherwise two) and merges neighbouring pairs far below it. Returns the mesh
/// unchanged when every residual is within tolerance. Throws MeshOverflowError
/// beyond `max_nodes`.
std::vector<double> refine_mesh(const std::vector<double>& mesh, const Vector& residuals,
                                double tol, std::size_t max_nodes);

/// The Newton system of the collocation equations on fixed meshes; unknowns
/// are the node states of every phase followed by the parameters.
class CollocationSystem : public NonlinearSystem {
 public:
  CollocationSystem(const BvpProblem& problem, std::vector<std::vector<double>> meshes);

  Vector residual(const Vector& x) override;
  SparseMatrix jacobian(const Vector& x) override;

  Vector pack(const std::vector<PhaseSolution>& phases, const Vector& params) const;
  std::vector<PhaseSolution> unpack(const Vector& x, Vector* params) const;
  Vector boundary_residual(const Vector& x);

  std::size_t size() const { return size_; }
  std::size_t ode_evals() const { return ode_evals_; }
  std::size_t bc_evals() const { return bc_evals_; }

 private:
  std::size_t offset(std::size_t phase, std::size_t node) const;
  Vector rhs(std::size_t phase, double s, const Vector& y, const Vector& p);
  void rhs_jacobian(std::size_t phase, double s, const Vector& y, const Vector& p,
                    const Vector& f, Matrix& fy, Matrix& fp);

  const BvpProblem& problem_;
  std::vector<std::vector<double>> meshes_;
  std::vector<std::size_t> phase_offsets_;
  std::size_t param_offset_ = 0;
  std::size_t size_ = 0;
  std::size_t ode_evals_ = 0;
  std::size_t bc_evals_ = 0;
};

}  // namespace hohmann::bvp
