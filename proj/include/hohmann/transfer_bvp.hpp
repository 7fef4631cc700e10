#pragma once

// Minimum-fuel two-impulse transfer as a boundary-value problem in the state
// (r, v) and its costate (p_r, p_v).
//
// Free-time problem: one coast from t0 to the unknown impulse time t1; the
// final circular orbit is entered at t1.
// Fixed-time problem: coast to the unknown interior instant t1, then coast on
// the final orbit until the given terminal time tf.
//
// All quantities inside the BVP are nondimensional: lengths by |r0|, speeds by
// V0 = sqrt(mu/|r0|), times by |r0|/V0 (so mu = 1). Impulses satisfy
// v(t+) = v(t-) + dv.

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

#include "hohmann/bvp_solver.hpp"
#include "hohmann/hohmann_analytic.hpp"
#include "hohmann/orbital_core.hpp"

namespace hohmann::transfer {

using Vec12 = Eigen::Matrix<double, 12, 1>;

struct Costate {
  Vec3 p_r = Vec3::Zero();
  Vec3 p_v = Vec3::Zero();
};

struct AugmentedState {
  CartesianState state;
  Costate costate;

  Vec12 to_vector() const;
  static AugmentedState from_vector(const Eigen::Ref<const Eigen::VectorXd>& y);
};

double hamiltonian(const AugmentedState& aug, const GravField& field);

/// (dp_r/dt, dp_v/dt) = (-(mu/r^3)(3 r r^T / r^2 - I) p_v, -p_r).
Costate costate_rhs(const AugmentedState& aug, const GravField& field);

/// State and costate derivative packed as 12 components.
Vec12 augmented_rhs(const AugmentedState& aug, const GravField& field);

/// (|r| - rf, |v| - vf, r . v).
Vec3 terminal_constraint_residuals(const Vec3& r, const Vec3& v, double rf, double vf);

struct MultiplierElimination {
  double gamma_r1 = 0.0;
  double gamma_v1 = 0.0;
  double gamma_2 = 0.0;
  Vec3 g_residuals = Vec3::Zero();
};

/// Solves for the terminal-constraint multipliers at the impulse instant and
/// returns the three remaining costate jump conditions as residuals. Pivot
/// components are chosen to maximise the pivot determinant. Throws PivotError.
MultiplierElimination eliminate_multipliers(const Vec3& p_r_minus, const Vec3& p_v_minus,
                                            const Vec3& p_r_plus, const Vec3& p_v_plus,
                                            const Vec3& r, const Vec3& v, double rf, double vf);

enum class ProblemKind { FreeTime, FixedFinalTime };

std::string_view to_string(ProblemKind kind);

/// How the initial profile of the collocation guess is built.
enum class GuessProfile {
  Propagated,  // integrate state and costate forward from the guessed values
  Constant,    // repeat the guessed initial values at every node
};

/// Initial values for the unknowns, in the units of the paper's tables:
/// impulses in m/s, the switch as t1 [s] (free time) or tau1 in (0, 1)
/// (fixed time), costates in scaled units.
struct TransferGuess {
  std::string name;
  Vec3 dv0 = Vec3::Zero();
  Vec3 dv1 = Vec3::Zero();
  double switch_value = 0.0;
  Costate costate;
  std::size_t mesh_nodes = 100;
  GuessProfile profile = GuessProfile::Propagated;
};

struct Scaling {
  double length = 1.0;
  double speed = 1.0;
  double time = 1.0;
};

/// Impulse-norm floor, in units of V0.
inline constexpr double kImpulseFloor = 1e-12;

struct TransferProblem {
  ProblemKind kind = ProblemKind::FreeTime;
  bvp::BvpProblem problem;
  bvp::BvpGuess guess;
  Scaling scaling;
  GravField field{1.0};
  Vec3 r0 = Vec3::Zero();  // dimensional
  Vec3 v0 = Vec3::Zero();
  double rf = 0.0;
  double tf = 0.0;  // fixed-time problem only
};

TransferProblem build_problem1(const Vec3& r0, const Vec3& v0, double rf, const GravField& field,
                               const TransferGuess& guess);

TransferProblem build_problem2(const Vec3& r0, const Vec3& v0, double rf, double tf,
                               const GravField& field, const TransferGuess& guess);

struct PrimerSample {
  double t = 0.0;
  Vec3 primer = Vec3::Zero();  // -p_v
  double magnitude = 0.0;
};

/// One mesh node of the converged solution in dimensional units (costates
/// keep their scaled values).
struct NodeSample {
  double t = 0.0;
  std::size_t phase = 0;
  AugmentedState scaled;      // nondimensional
  CartesianState dimensional;
  double hamiltonian = 0.0;   // scaled
};

struct ExtractedTransfer {
  ProblemKind kind = ProblemKind::FreeTime;
  ImpulsivePlan plan;
  double switch_value = 0.0;  // t1 [s] or tau1
  std::vector<PrimerSample> primer;
  std::vector<Trajectory> arcs;  // one coast arc per phase
  std::vector<NodeSample> nodes;
  double hamiltonian_jump = 0.0;         // H(t1-) - H(t1+) (scaled)
  double interior_diagnostic = 0.0;      // -p_r(t1-) . dv1 (scaled)
  double max_bc_residual = 0.0;
};

ExtractedTransfer extract_plan(const bvp::BvpSolution& solution, const TransferProblem& problem);

/// Named initial guesses shipped with the library.
const TransferGuess& preset_guess(std::string_view name);
std::vector<std::string> preset_guess_names();

}  // namespace hohmann::transfer
