#include "hohmann/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "hohmann/bvp_solver.hpp"
#include "hohmann/errors.hpp"
#include "hohmann/hohmann_analytic.hpp"
#include "hohmann/kkt_solver.hpp"
#include "hohmann/orbital_core.hpp"
#include "hohmann/transfer_bvp.hpp"

namespace hohmann::verification {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kEx1R0 = kEarthRadius + 300000.0;
constexpr double kEx1Rf = 42164000.0;
constexpr double kEx2R0 = kEarthRadius + 200000.0;
constexpr double kEx2Rf = kEarthRadius + 400000.0;
constexpr double kEx2Tf = 2800.0;
// Solver tolerance of the BVP criteria; see README for why it is tighter than
// the tolerance quoted with the reference runs.
constexpr double kBvpTol = 1e-8;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

Check rel_check(const std::string& label, double got, double want, double bound) {
  const double e = rel_err(got, want);
  return {label, e < bound, num(got) + " (rel err " + sci(e) + ")", num(want) + " within " + sci(bound)};
}

Check below(const std::string& label, double got, double bound) {
  return {label, got < bound, sci(got), "< " + sci(bound)};
}

Check flag(const std::string& label, bool ok, const std::string& measured,
           const std::string& expected) {
  return {label, ok, measured, expected};
}

const GravField& earth() {
  static const GravField f(kEarthMu);
  return f;
}

struct SolvedTransfer {
  transfer::TransferProblem problem;
  bvp::BvpSolution solution;
  transfer::ExtractedTransfer plan;
  double seconds = 0.0;
};

SolvedTransfer solve_example(bool fixed_time, const std::string& preset, double tol) {
  const auto t0 = Clock::now();
  SolvedTransfer out;
  const double r0 = fixed_time ? kEx2R0 : kEx1R0;
  const double rf = fixed_time ? kEx2Rf : kEx1Rf;
  const Vec3 r0v(r0, 0.0, 0.0);
  const Vec3 v0v(0.0, circular_velocity(r0, earth()), 0.0);
  const auto& guess = transfer::preset_guess(preset);
  out.problem = fixed_time ? transfer::build_problem2(r0v, v0v, rf, kEx2Tf, earth(), guess)
                           : transfer::build_problem1(r0v, v0v, rf, earth(), guess);
  bvp::SolverOptions opt;
  opt.tol = tol;
  out.solution = bvp::solve(out.problem.problem, out.problem.guess, opt);
  out.plan = transfer::extract_plan(out.solution, out.problem);
  out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

// --- individual criteria ----------------------------------------------------

void criterion1(CriterionResult& r) {
  const auto t0 = Clock::now();
  const ImpulsivePlan p = hohmann_plan(kEx2R0, kEx2Rf, earth());
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  r.checks.push_back(rel_check("|dv0| [m/s]", p.dv0.norm(), 58.064987253967857, 1e-12));
  r.checks.push_back(rel_check("|dv1| [m/s]", p.dv1.norm(), 57.631827424189602, 1e-12));
  r.checks.push_back(below("runtime [s]", dt, 0.1));
}

void criterion2(CriterionResult& r) {
  const ImpulsivePlan p = hohmann_plan(kEx1R0, kEx1Rf, earth());
  r.checks.push_back(rel_check("|dv0| [m/s]", p.dv0.norm(), 2425.726280326563, 1e-12));
  r.checks.push_back(rel_check("|dv1| [m/s]", p.dv1.norm(), 1466.822833675619, 1e-12));
}

void criterion3(CriterionResult& r) {
  r.checks.push_back(
      rel_check("t_HT [s]", transfer_time(kEx2R0, kEx2Rf, earth()), 2715.594949192177, 1e-12));
}

void criterion4(CriterionResult& r) {
  const auto t0 = Clock::now();
  constexpr int n = 50;
  const double lo = std::log(1.001), hi = std::log(100.0);
  double worst_res = 0.0;
  int cost_order_ok = 0;
  int pro_min = 0, retro_min = 0;
  double min_pro_curv = INFINITY, max_retro_curv = -INFINITY;
  for (int i = 1; i <= n; ++i) {
    const double rbar = std::exp(lo + (hi - lo) * i / n);
    const auto [pro, retro] = kkt::stationary_points(rbar);
    worst_res = std::max({worst_res, kkt::kkt_residuals(pro.point, rbar).max_abs(),
                          kkt::kkt_residuals(retro.point, rbar).max_abs()});
    if (pro.cost < retro.cost) ++cost_order_ok;
    const auto tp = kkt::projected_hessian_test(pro.point, rbar);
    const auto tr = kkt::projected_hessian_test(retro.point, rbar);
    pro_min += tp.is_strict_local_min ? 1 : 0;
    retro_min += tr.is_strict_local_min ? 1 : 0;
    min_pro_curv = std::min(min_pro_curv, tp.curvature);
    max_retro_curv = std::max(max_retro_curv, tr.curvature);
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  r.checks.push_back(below("max KKT residual", worst_res, 1e-11));
  r.checks.push_back(flag("prograde cost < retrograde cost", cost_order_ok == n,
                          std::to_string(cost_order_ok) + "/" + std::to_string(n) + " ratios",
                          std::to_string(n) + "/" + std::to_string(n)));
  r.checks.push_back(flag("projected Hessian, prograde", pro_min == n,
                          std::to_string(pro_min) + "/50 positive, min curvature " +
                              num(min_pro_curv),
                          "50/50 positive"));
  r.checks.push_back(flag("projected Hessian, retrograde", retro_min == n,
                          std::to_string(retro_min) + "/50 positive, max curvature " +
                              num(max_retro_curv),
                          "50/50 positive"));
  r.checks.push_back(below("runtime [s]", dt, 1.0));
  if (retro_min != n) {
    r.notes.push_back(
        "the retrograde stationary point has negative curvature along the constraint "
        "boundary: it is a KKT point but not a constrained local minimum in (x0, y0)");
  }
}

void criterion5(CriterionResult& r) {
  const double v0 = circular_velocity(kEx1R0, earth());
  const auto [pro, retro] = kkt::stationary_points(kEx1Rf / kEx1R0);
  r.checks.push_back(
      rel_check("|y0^| V0 [m/s]", std::abs(retro.point.y0) * v0, 1.787722892643957e4, 1e-9));
  r.checks.push_back(rel_check("yf^ V0 [m/s]", retro.point.yf * v0, 4.682506326686718e3, 1e-9));
}

void criterion6(CriterionResult& r) {
  const auto t0 = Clock::now();
  constexpr std::size_t n = 2001;
  const auto g = kkt::grid_search_oracle(2.0, {-1.0, 1.0}, {-3.0, 1.0}, n);
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  const double hx = 2.0 / (n - 1), hy = 4.0 / (n - 1);
  const double y_star = kkt::stationary_points(2.0).first.point.y0;
  r.checks.push_back(flag("|x0 - 0| <= spacing", std::abs(g.x0) <= hx * (1 + 1e-9), num(g.x0),
                          "|x0| <= " + num(hx)));
  r.checks.push_back(flag("|y0 - y0*| <= spacing", std::abs(g.y0 - y_star) <= hy * (1 + 1e-9),
                          num(g.y0), num(y_star) + " +- " + num(hy)));
  r.checks.push_back(below("runtime [s]", dt, 10.0));
  if (std::abs(g.x0) > hx) {
    // Best feasible node on the x0 = 0 column, for comparison.
    double best = INFINITY, best_y = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = -3.0 + hy * static_cast<double>(j);
      if (constraint(0.0, y, 2.0) < 0.0) continue;
      const auto c = try_cost_parts(0.0, y, 2.0);
      if (c && c->total() < best) {
        best = c->total();
        best_y = y;
      }
    }
    r.notes.push_back("grid arg-min cost " + num(g.cost) + " at (" + num(g.x0) + ", " + num(g.y0) +
                      "); best feasible node with x0 = 0 is (0, " + num(best_y) + ") with cost " +
                      num(best) + ". The nearest nodes to (0, y0*) violate the constraint, so the "
                      "discrete minimiser slides along the active boundary");
  }
}

void bvp_literal_note(CriterionResult& r, bool fixed_time, double tol) {
  try {
    const auto s = solve_example(fixed_time, fixed_time ? "example2-hohmann" : "example1-hohmann",
                                 tol);
    std::ostringstream os;
    os << "at solver tol " << sci(tol) << ": dv0 = (" << num(s.plan.plan.dv0[0]) << ", "
       << num(s.plan.plan.dv0[1]) << "), dv1 = (" << num(s.plan.plan.dv1[0]) << ", "
       << num(s.plan.plan.dv1[1]) << "), switch = " << num(s.plan.switch_value);
    r.notes.push_back(os.str());
  } catch (const Error& e) {
    r.notes.push_back("at solver tol " + sci(tol) + ": " + e.what());
  }
}

void criterion7(CriterionResult& r) {
  const auto s = solve_example(false, "example1-hohmann", kBvpTol);
  const auto& p = s.plan.plan;
  r.checks.push_back(rel_check("dv0 tangential [m/s]", p.dv0[1], 2425.726280326426, 1e-9));
  r.checks.push_back(rel_check("dv1 tangential [m/s]", p.dv1[1], -1466.822833675464, 1e-9));
  const double off = std::max({std::abs(p.dv0[0]), std::abs(p.dv0[2]), std::abs(p.dv1[0]),
                               std::abs(p.dv1[2])});
  r.checks.push_back(below("radial/out-of-plane [m/s]", off, 1e-6));
  r.checks.push_back(
      rel_check("t1 [s]", p.t_impulse_1, transfer_time(kEx1R0, kEx1Rf, earth()), 1e-9));
  r.checks.push_back(below("max boundary residual", s.solution.max_bc_residual, 1e-6));
  r.checks.push_back(below("runtime [s]", s.seconds, 300.0));
  r.notes.push_back("solver tol " + sci(kBvpTol) + ", " + std::to_string(s.solution.total_nodes()) +
                    " mesh points");
  bvp_literal_note(r, false, 1e-6);
}

void criterion8(CriterionResult& r) {
  const auto s = solve_example(true, "example2-hohmann", kBvpTol);
  const auto& p = s.plan.plan;
  r.checks.push_back(rel_check("dv0 y [m/s]", p.dv0[1], 58.064987253970472, 1e-6));
  r.checks.push_back(rel_check("dv1 y [m/s]", p.dv1[1], -57.631827424187151, 1e-6));
  const double e_tau = std::abs(s.plan.switch_value - 0.969855338997211);
  r.checks.push_back({"tau1", e_tau < 1e-9,
                      num(s.plan.switch_value) + " (abs err " + sci(e_tau) + ")",
                      "0.969855338997211 within 1e-9"});
  r.checks.push_back(below("max boundary residual", s.solution.max_bc_residual, 1e-7));
  r.checks.push_back(below("runtime [s]", s.seconds, 600.0));
  r.notes.push_back("solver tol " + sci(kBvpTol) + ", " + std::to_string(s.solution.total_nodes()) +
                    " mesh points");
  bvp_literal_note(r, true, 1e-7);
}

void criterion9(CriterionResult& r) {
  const auto s = solve_example(true, "example2-retrograde", kBvpTol);
  const auto& p = s.plan.plan;
  r.checks.push_back(rel_check("|dv0| [m/s]", p.dv0.norm(), 1.562657038966310e4, 1e-6));
  r.checks.push_back(rel_check("|dv1| [m/s]", p.dv1.norm(), 1.527946697280544e4, 1e-6));
  const double e_tau = std::abs(s.plan.switch_value - 0.969855338997211);
  r.checks.push_back({"tau1", e_tau < 1e-9,
                      num(s.plan.switch_value) + " (abs err " + sci(e_tau) + ")",
                      "0.969855338997211 within 1e-9"});
}

double gradient_rel_error(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.8, 3.0);
  transfer::AugmentedState a;
  Vec3 dir(u(rng), u(rng), u(rng));
  while (dir.norm() < 1e-3) dir = Vec3(u(rng), u(rng), u(rng));
  a.state.r = dir.normalized() * radius(rng);
  a.state.v = Vec3(u(rng), u(rng), u(rng));
  a.costate.p_r = Vec3(u(rng), u(rng), u(rng));
  a.costate.p_v = Vec3(u(rng), u(rng), u(rng));
  const GravField unit(1.0);
  const auto d = transfer::costate_rhs(a, unit);
  Vec3 gr, gv;
  for (int i = 0; i < 3; ++i) {
    const double h = 1e-6;
    auto ap = a, am = a;
    ap.state.r[i] += h;
    am.state.r[i] -= h;
    gr[i] = (transfer::hamiltonian(ap, unit) - transfer::hamiltonian(am, unit)) / (2 * h);
    ap = a;
    am = a;
    ap.state.v[i] += h;
    am.state.v[i] -= h;
    gv[i] = (transfer::hamiltonian(ap, unit) - transfer::hamiltonian(am, unit)) / (2 * h);
  }
  Eigen::Matrix<double, 6, 1> got, want;
  got << d.p_r, d.p_v;
  want << -gr, -gv;
  return (got - want).norm() / std::max(want.norm(), 1e-12);
}

double linear_bvp_error(std::size_t intervals) {
  const double L = M_PI / 2.0;
  bvp::BvpProblem P;
  bvp::Phase ph;
  ph.dimension = 2;
  ph.rhs = [L](double, const bvp::Vector& y, const bvp::Vector&) {
    bvp::Vector f(2);
    f << L * y[1], -L * y[0];
    return f;
  };
  P.phases = {ph};
  P.boundary_residual = [](const std::vector<bvp::Vector>& l, const std::vector<bvp::Vector>& r,
                           const bvp::Vector&) {
    bvp::Vector res(2);
    res << l[0][0], r[0][0] - 1.0;
    return res;
  };
  bvp::BvpGuess g;
  g.phases.push_back(
      bvp::sample_guess(bvp::uniform_mesh(intervals + 1), [](double) { return bvp::Vector::Zero(2); }));
  bvp::SolverOptions opt;
  opt.adapt = false;
  const auto sol = bvp::solve(P, g, opt);
  double err = 0.0;
  const auto& phs = sol.phases[0];
  for (std::size_t i = 0; i < phs.mesh.size(); ++i) {
    err = std::max(err, std::abs(phs.states[i][0] - std::sin(L * phs.mesh[i])));
  }
  return err;
}

void criterion10(CriterionResult& r) {
  // Conservation on coasts: Hohmann transfer ellipse and random ellipses.
  {
    const double tol = 1e-10;
    std::mt19937_64 rng(20261014);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
      CartesianState s0;
      double duration = 0.0;
      if (k == 0) {
        const ImpulsivePlan p = hohmann_plan(kEx2R0, kEx2Rf, earth());
        s0.r = Vec3(kEx2R0, 0.0, 0.0);
        s0.v = Vec3(0.0, circular_velocity(kEx2R0, earth()), 0.0) + p.dv0;
        duration = transfer_time(kEx2R0, kEx2Rf, earth());
      } else {
        const double rr = kEarthRadius * (1.1 + 3.0 * u(rng));
        const double vc = circular_velocity(rr, earth());
        s0.r = Vec3(rr, 0.0, 0.0);
        s0.v = Vec3(0.3 * vc * (u(rng) - 0.5), vc * (0.8 + 0.5 * u(rng)), 0.2 * vc * (u(rng) - 0.5));
        duration = 2.0 * M_PI * std::sqrt(rr * rr * rr / kEarthMu);
      }
      const auto traj = propagate(s0, earth(), duration, tol);
      const auto c0 = conserved(s0, earth());
      for (const auto& smp : traj.samples()) {
        const auto c = conserved(smp.state, earth());
        worst = std::max({worst, std::abs(c.energy - c0.energy) / std::abs(c0.energy),
                          (c.h_vec - c0.h_vec).norm() / c0.h_vec.norm()});
      }
    }
    r.checks.push_back(below("conservation drift (tol 1e-10)", worst, 10.0 * tol));
  }
  // Costate equations against the gradient of the Hamiltonian.
  {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, gradient_rel_error(rng));
    r.checks.push_back(below("costate vs -dH/dx, 100 states", worst, 1e-6));
  }
  // Converged free-time Hohmann solution: H, unit primer, primer bound.
  {
    const auto s = solve_example(false, "example1-hohmann", kBvpTol);
    const GravField unit(1.0);
    const auto& ph = s.solution.phases[0];
    double h_max = 0.0, primer_max = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const auto a = transfer::AugmentedState::from_vector(ph.eval(i / 2000.0));
      h_max = std::max(h_max, std::abs(transfer::hamiltonian(a, unit)));
      primer_max = std::max(primer_max, a.costate.p_v.norm());
    }
    const double u0 = transfer::AugmentedState::from_vector(ph.states.front()).costate.p_v.norm();
    const double u1 = transfer::AugmentedState::from_vector(ph.states.back()).costate.p_v.norm();
    r.checks.push_back(below("|H| along coast", h_max, 1e-6));
    r.checks.push_back(below("| |primer| - 1 | at impulses", std::max(std::abs(u0 - 1), std::abs(u1 - 1)),
                             1e-6));
    r.checks.push_back(
        flag("max |primer| on coast", primer_max <= 1.0 + 1e-4, num(primer_max), "<= 1 + 1e-4"));
  }
  // Mesh convergence order of the collocation scheme.
  {
    const double e1 = linear_bvp_error(16);
    const double e2 = linear_bvp_error(32);
    const double ratio = e1 / e2;
    r.checks.push_back(flag("error ratio, h -> h/2", ratio >= 12.0 && ratio <= 20.0, num(ratio),
                            "in [12, 20]"));
  }
}

const std::function<void(CriterionResult&)> kRunners[kCriterionCount] = {
    criterion1, criterion2, criterion3, criterion4, criterion5,
    criterion6, criterion7, criterion8, criterion9, criterion10};

constexpr std::string_view kTitles[kCriterionCount] = {
    "analytic impulses, Example 2",
    "analytic impulses, Example 1",
    "transfer time, Example 2",
    "KKT closed forms over 50 ratios",
    "retrograde branch magnitudes, Example 1",
    "grid oracle at rbar_f = 2",
    "free-time BVP, Example 1",
    "fixed-time BVP, Example 2",
    "local-minimum BVP branch, Example 2",
    "property suite",
};

}  // namespace

std::string CriterionResult::summary_line() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.3f s)", seconds);
  return std::string(passed ? "[PASS] " : "[FAIL] ") + std::to_string(id) + " " + title + buf;
}

bool Report::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

std::string_view criterion_title(int id) {
  if (id < 1 || id > kCriterionCount) throw PreconditionError("criterion id out of range");
  return kTitles[id - 1];
}

std::vector<int> parse_filter(std::string_view filter) {
  auto bad = [&](const std::string& why) -> ConfigError {
    return ConfigError("filter '" + std::string(filter) + "': " + why);
  };
  std::vector<int> ids;
  if (filter.empty() || filter == "all") {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
    return ids;
  }
  auto to_int = [&](std::string_view s) {
    if (s.empty() || s.size() > 3) throw bad("expected a criterion number");
    int v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw bad("expected a criterion number");
      v = v * 10 + (c - '0');
    }
    if (v < 1 || v > kCriterionCount) throw bad("criterion numbers run from 1 to 10");
    return v;
  };
  std::string_view rest = filter;
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (const auto dash = item.find('-'); dash != std::string_view::npos) {
      const int a = to_int(item.substr(0, dash));
      const int b = to_int(item.substr(dash + 1));
      if (b < a) throw bad("descending range");
      for (int i = a; i <= b; ++i) ids.push_back(i);
    } else {
      ids.push_back(to_int(item));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

CriterionResult run_criterion(int id) {
  CriterionResult r;
  r.id = id;
  r.title = std::string(criterion_title(id));
  const auto t0 = Clock::now();
  try {
    kRunners[id - 1](r);
    r.passed = !r.checks.empty() &&
               std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.passed; });
  } catch (const std::exception& e) {
    r.passed = false;
    r.checks.push_back({"completed without error", false, e.what(), "no exception"});
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::string describe(const CriterionResult& r) {
  std::ostringstream os;
  os << r.summary_line() << '\n';
  for (const auto& c : r.checks) {
    os << "    " << (c.passed ? "ok   " : "FAIL ") << c.label << ": " << c.measured
       << "  [expected " << c.expected << "]\n";
  }
  for (const auto& n : r.notes) os << "    note: " << n << '\n';
  return os.str();
}

Report run(std::string_view filter, std::ostream* log, bool verbose) {
  Report rep;
  for (int id : parse_filter(filter)) {
    rep.results.push_back(run_criterion(id));
    if (log) {
      *log << (verbose ? describe(rep.results.back()) : rep.results.back().summary_line() + "\n");
      log->flush();
    }
  }
  return rep;
}

}  // namespace hohmann::verification
