#pragma once

// Scenario configs, run summaries and the ratio sweep behind the CLI.
//
// Config format: one `key = value` per line, `#` starts a comment, blank
// lines ignored. Vectors are three comma-separated numbers.
//
//   mode              analytic | kkt | bvp1 | bvp2 | verify     (required)
//   name              label used for output file names          (default "scenario")
//   mu                gravitational parameter [m^3/s^2]        (default 3.986e14)
//   reference_radius  body radius for altitudes [m]             (default 6378145)
//   r0 | altitude0    initial circular orbit [m], exactly one
//   rf | altitudef    final circular orbit [m], exactly one
//   tf                terminal time [s], bvp2 only
//   guess             guess preset name (bvp modes)
//   guess.dv0, guess.dv1, guess.p_r, guess.p_v   vectors overriding the preset
//   guess.switch      t1 [s] (bvp1) or tau1 (bvp2)
//   guess.nodes       initial mesh nodes
//   guess.profile     propagated | constant
//   tol               solver tolerance                          (default 1e-6)
//   max_nodes         mesh budget per phase                     (default 50000)
//   summary           summary file name                         (default <name>-summary.json)
//   trajectory        trajectory table file name                (default <name>-trajectory.csv)
//   filter            criteria for verify mode, e.g. "1,2,7"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hohmann/orbital_core.hpp"
#include "hohmann/transfer_bvp.hpp"

namespace hohmann::scenario {

enum class Mode { Analytic, Kkt, Bvp1, Bvp2, Verify };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct OrbitSpec {
  enum class Kind { Radius, Altitude };
  Kind kind = Kind::Radius;
  double value = 0.0;

  double radius(double reference_radius) const;
  bool operator==(const OrbitSpec&) const = default;
};

struct GuessOverrides {
  std::optional<Vec3> dv0, dv1, p_r, p_v;
  std::optional<double> switch_value;
  std::optional<std::size_t> nodes;
  std::optional<transfer::GuessProfile> profile;
  bool operator==(const GuessOverrides&) const = default;
};

struct ScenarioConfig {
  Mode mode = Mode::Analytic;
  std::string name = "scenario";
  double mu = kEarthMu;
  double reference_radius = kEarthRadius;
  std::optional<OrbitSpec> initial;
  std::optional<OrbitSpec> final;
  std::optional<double> tf;
  std::string guess_preset;
  GuessOverrides guess;
  double tol = 1e-6;
  std::size_t max_nodes = 50000;
  std::string summary_path;
  std::string trajectory_path;
  std::string filter;

  bool operator==(const ScenarioConfig&) const = default;

  double r0() const;
  double rf() const;
  /// Preset (if any) with the explicit overrides applied.
  transfer::TransferGuess resolved_guess() const;
  std::string summary_file() const;
  std::string trajectory_file() const;
};

/// Throws ConfigError with the offending line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
/// Canonical text; parse_config(serialize(c)) == c.
std::string serialize(const ScenarioConfig& config);
/// Semantic checks beyond syntax (orbits present, tf for bvp2, preset exists).
void validate(const ScenarioConfig& config);

/// Complete scenarios reproducing the worked examples.
ScenarioConfig preset_scenario(std::string_view name);
std::vector<std::string> preset_scenario_names();

enum class Branch { Global, Local, Unclassified, NotApplicable };
std::string_view to_string(Branch branch);
Branch parse_branch(std::string_view text);

struct KktSummary {
  double rbar_f = 0.0;
  double prograde_x0 = 0.0, prograde_y0 = 0.0, prograde_lambda = 0.0, prograde_cost = 0.0;
  double retrograde_x0 = 0.0, retrograde_y0 = 0.0, retrograde_lambda = 0.0, retrograde_cost = 0.0;
  double prograde_residual = 0.0, retrograde_residual = 0.0;
  double prograde_curvature = 0.0, retrograde_curvature = 0.0;
  bool prograde_strict_min = false, retrograde_strict_min = false;
  bool operator==(const KktSummary&) const = default;
};

struct CriterionLine {
  int id = 0;
  bool passed = false;
  std::string text;
  bool operator==(const CriterionLine&) const = default;
};

struct RunSummary {
  std::string mode;
  std::string name;
  std::string status = "ok";  // ok | nonconvergence | verification-failed
  std::string message;
  // inputs echo
  double mu = 0.0, r0 = 0.0, rf = 0.0, tf = 0.0, tol = 0.0;
  std::string guess_preset;
  // results
  Vec3 dv0 = Vec3::Zero(), dv1 = Vec3::Zero();
  double cost = 0.0;
  double t1 = 0.0;
  double t_ht = 0.0;
  double tau1 = 0.0;
  double hohmann_dv0 = 0.0, hohmann_dv1 = 0.0;
  std::string branch = "n/a";
  // solver diagnostics
  bool converged = false;
  std::size_t mesh_points = 0;
  double max_residual = 0.0;
  double max_bc_residual = 0.0;
  std::size_t ode_evals = 0, bc_evals = 0, newton_iters = 0, lm_iters = 0, refinements = 0;
  double hamiltonian_jump = 0.0;
  double interior_diagnostic = 0.0;
  double seconds = 0.0;
  std::optional<KktSummary> kkt;
  std::vector<CriterionLine> criteria;
  std::vector<std::string> files;

  bool operator==(const RunSummary&) const = default;
};

std::string to_json(const RunSummary& summary);
RunSummary summary_from_json(std::string_view json);
/// Human-readable block, including the solver's diagnostic lines.
std::string to_text(const RunSummary& summary);

enum class RunStatus { Ok = 0, Nonconvergence = 3, VerificationFailed = 4 };

struct RunResult {
  RunStatus status = RunStatus::Ok;
  RunSummary summary;
};

/// Executes the scenario and writes the summary (and trajectory table for bvp
/// modes) into `out_dir`. Throws ConfigError on invalid configs; solver
/// nonconvergence is reported through the status with the summary written.
RunResult run(const ScenarioConfig& config, const std::string& out_dir, std::ostream* log = nullptr);

/// Label of a converged plan relative to the two stationary costs.
Branch classify(double cost, double r0, double rf, const GravField& field, double rel_tol = 1e-6);

struct SweepRow {
  double rbar_f = 0.0;
  double y0_prograde = 0.0;
  double y0_retrograde = 0.0;
  double cost_prograde = 0.0;
  double cost_retrograde = 0.0;
};

/// n log-spaced ratios on [lo, hi]; lo must exceed 1. n == 1 gives lo only.
std::vector<SweepRow> sweep(double lo, double hi, std::size_t n);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes the bvp trajectory table: t, r(3), v(3), p_r(3), p_v(3), |primer|.
std::string trajectory_csv(const transfer::ExtractedTransfer& transfer);

}  // namespace hohmann::scenario
