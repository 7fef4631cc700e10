#include "hohmann/bvp_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace hohmann::bvp {

namespace {

// Interior sample points of the 5-point Lobatto rule, where the residual of
// the continuous extension of Simpson collocation does not vanish.
constexpr double kSampleOffset = 0.32732683535398857;  // sqrt(21) / 14

double scaled_step_norm(const Vector& step, const Vector& x) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < step.size(); ++i) {
    m = std::max(m, std::abs(step[i]) / (1.0 + std::abs(x[i])));
  }
  return m;
}

double scaled_l2(const Vector& v, const Vector& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double t = v[i] / (1.0 + std::abs(x[i]));
    s += t * t;
  }
  return std::sqrt(s);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(4);
  os << std::scientific << v;
  return os.str();
}

void check_mesh(const std::vector<double>& mesh) {
  if (mesh.size() < 2) throw PreconditionError("mesh needs at least two nodes");
  for (std::size_t i = 1; i < mesh.size(); ++i) {
    if (!(mesh[i] > mesh[i - 1])) throw PreconditionError("mesh must be strictly increasing");
  }
}

// Hermite derivative on [a, b] at fraction t.
Vector hermite_value(double t, double h, const Vector& ya, const Vector& fa, const Vector& yb,
                     const Vector& fb) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ya + (t3 - 2 * t2 + t) * h * fa + (-2 * t3 + 3 * t2) * yb +
         (t3 - t2) * h * fb;
}

Vector hermite_slope(double t, double h, const Vector& ya, const Vector& fa, const Vector& yb,
                     const Vector& fb) {
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * ya + (-6 * t2 + 6 * t) * yb) / h + (3 * t2 - 4 * t + 1) * fa +
         (3 * t2 - 2 * t) * fb;
}

}  // namespace

std::size_t BvpProblem::residual_dimension() const {
  std::size_t n = n_params;
  for (const auto& p : phases) n += p.dimension;
  return n;
}

std::size_t BvpSolution::total_nodes() const {
  std::size_t n = 0;
  for (const auto& p : phases) n += p.mesh.size();
  return n;
}

PhaseGuess sample_guess(std::vector<double> mesh, const std::function<Vector(double)>& profile) {
  check_mesh(mesh);
  PhaseGuess g;
  g.states.reserve(mesh.size());
  for (double s : mesh) g.states.push_back(profile(s));
  g.mesh = std::move(mesh);
  return g;
}

std::vector<double> uniform_mesh(std::size_t n) {
  if (n < 2) throw PreconditionError("uniform_mesh: need at least two nodes");
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  m.back() = 1.0;
  return m;
}

Vector PhaseSolution::eval(double s) const {
  if (mesh.size() < 2 || states.size() != mesh.size() || slopes.size() != mesh.size()) {
    throw PreconditionError("phase solution needs matching mesh, states and slopes");
  }
  if (s <= mesh.front()) return states.front();
  if (s >= mesh.back()) return states.back();
  const auto it = std::upper_bound(mesh.begin(), mesh.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - mesh.begin()) - 1;
  const double h = mesh[i + 1] - mesh[i];
  return hermite_value((s - mesh[i]) / h, h, states[i], slopes[i], states[i + 1], slopes[i + 1]);
}

// ---------------------------------------------------------------------------
// Collocation system

CollocationSystem::CollocationSystem(const BvpProblem& problem,
                                     std::vector<std::vector<double>> meshes)
    : problem_(problem), meshes_(std::move(meshes)) {
  if (meshes_.size() != problem_.phases.size()) {
    throw PreconditionError("one mesh per phase is required");
  }
  std::size_t off = 0;
  for (std::size_t k = 0; k < meshes_.size(); ++k) {
    check_mesh(meshes_[k]);
    phase_offsets_.push_back(off);
    off += meshes_[k].size() * problem_.phases[k].dimension;
  }
  param_offset_ = off;
  size_ = off + problem_.n_params;
}

std::size_t CollocationSystem::offset(std::size_t phase, std::size_t node) const {
  return phase_offsets_[phase] + node * problem_.phases[phase].dimension;
}

Vector CollocationSystem::rhs(std::size_t phase, double s, const Vector& y, const Vector& p) {
  ++ode_evals_;
  return problem_.phases[phase].rhs(s, y, p);
}

void CollocationSystem::rhs_jacobian(std::size_t phase, double s, const Vector& y,
                                     const Vector& p, const Vector& f, Matrix& fy, Matrix& fp) {
  const auto& ph = problem_.phases[phase];
  const auto d = static_cast<Eigen::Index>(ph.dimension);
  const auto np = static_cast<Eigen::Index>(problem_.n_params);
  fy.resize(d, d);
  fp.resize(d, np);
  if (ph.jacobian) {
    ph.jacobian(s, y, p, fy, fp);
    return;
  }
  const double sq = std::sqrt(std::numeric_limits<double>::epsilon());
  Vector yy = y;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double del = sq * (1.0 + std::abs(y[j]));
    yy[j] = y[j] + del;
    fy.col(j) = (rhs(phase, s, yy, p) - f) / del;
    yy[j] = y[j];
  }
  Vector pp = p;
  for (Eigen::Index j = 0; j < np; ++j) {
    const double del = sq * (1.0 + std::abs(p[j]));
    pp[j] = p[j] + del;
    fp.col(j) = (rhs(phase, s, y, pp) - f) / del;
    pp[j] = p[j];
  }
}

Vector CollocationSystem::pack(const std::vector<PhaseSolution>& phases,
                               const Vector& params) const {
  if (phases.size() != meshes_.size()) throw PreconditionError("pack: one phase per mesh is required");
  if (static_cast<std::size_t>(params.size()) != problem_.n_params) {
    throw PreconditionError("pack: parameter vector has the wrong length");
  }
  Vector x(static_cast<Eigen::Index>(size_));
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const auto d = static_cast<Eigen::Index>(problem_.phases[k].dimension);
    for (std::size_t i = 0; i < meshes_[k].size(); ++i) {
      x.segment(static_cast<Eigen::Index>(offset(k, i)), d) = phases[k].eval(meshes_[k][i]);
    }
  }
  x.tail(static_cast<Eigen::Index>(problem_.n_params)) = params;
  return x;
}

std::vector<PhaseSolution> CollocationSystem::unpack(const Vector& x, Vector* params) const {
  std::vector<PhaseSolution> out(meshes_.size());
  const Vector p = x.tail(static_cast<Eigen::Index>(problem_.n_params));
  for (std::size_t k = 0; k < meshes_.size(); ++k) {
    const auto d = static_cast<Eigen::Index>(problem_.phases[k].dimension);
    out[k].mesh = meshes_[k];
    for (std::size_t i = 0; i < meshes_[k].size(); ++i) {
      out[k].states.push_back(x.segment(static_cast<Eigen::Index>(offset(k, i)), d));
      out[k].slopes.push_back(problem_.phases[k].rhs(meshes_[k][i], out[k].states.back(), p));
    }
  }
  if (params) *params = p;
  return out;
}

Vector CollocationSystem::boundary_residual(const Vector& x) {
  std::vector<Vector> left, right;
  for (std::size_t k = 0; k < meshes_.size(); ++k) {
    const auto d = static_cast<Eigen::Index>(problem_.phases[k].dimension);
    left.push_back(x.segment(static_cast<Eigen::Index>(offset(k, 0)), d));
    right.push_back(x.segment(static_cast<Eigen::Index>(offset(k, meshes_[k].size() - 1)), d));
  }
  ++bc_evals_;
  Vector r = problem_.boundary_residual(left, right, x.tail(static_cast<Eigen::Index>(problem_.n_params)));
  if (static_cast<std::size_t>(r.size()) != problem_.residual_dimension()) {
    throw PreconditionError("boundary residual has length " + std::to_string(r.size()) +
                            ", expected " + std::to_string(problem_.residual_dimension()));
  }
  return r;
}

Vector CollocationSystem::residual(const Vector& x) {
  Vector F(static_cast<Eigen::Index>(size_));
  const Vector p = x.tail(static_cast<Eigen::Index>(problem_.n_params));
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < meshes_.size(); ++k) {
    const auto d = static_cast<Eigen::Index>(problem_.phases[k].dimension);
    const auto& mesh = meshes_[k];
    Vector f_prev = rhs(k, mesh[0], x.segment(static_cast<Eigen::Index>(offset(k, 0)), d), p);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      const double h = mesh[i + 1] - mesh[i];
      const Vector ya = x.segment(static_cast<Eigen::Index>(offset(k, i)), d);
      const Vector yb = x.segment(static_cast<Eigen::Index>(offset(k, i + 1)), d);
      const Vector fb = rhs(k, mesh[i + 1], yb, p);
      const Vector ym = 0.5 * (ya + yb) - h / 8.0 * (fb - f_prev);
      const Vector fm = rhs(k, mesh[i] + 0.5 * h, ym, p);
      F.segment(row, d) = yb - ya - h / 6.0 * (f_prev + 4.0 * fm + fb);
      row += d;
      f_prev = fb;
    }
  }
  F.tail(static_cast<Eigen::Index>(problem_.residual_dimension())) = boundary_residual(x);
  return F;
}

SparseMatrix CollocationSystem::jacobian(const Vector& x) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> trip;
  const Vector p = x.tail(static_cast<Eigen::Index>(problem_.n_params));
  const auto np = static_cast<Eigen::Index>(problem_.n_params);
  const auto pcol = static_cast<Eigen::Index>(param_offset_);
  Eigen::Index row = 0;

  auto add_block = [&](Eigen::Index r0, Eigen::Index c0, const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != 0.0) trip.emplace_back(r0 + i, c0 + j, m(i, j));
      }
    }
  };

  for (std::size_t k = 0; k < meshes_.size(); ++k) {
    const auto d = static_cast<Eigen::Index>(problem_.phases[k].dimension);
    const auto& mesh = meshes_[k];
    const Matrix I = Matrix::Identity(d, d);
    std::vector<Vector> f(mesh.size());
    std::vector<Matrix> fy(mesh.size()), fp(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const Vector y = x.segment(static_cast<Eigen::Index>(offset(k, i)), d);
      f[i] = rhs(k, mesh[i], y, p);
      rhs_jacobian(k, mesh[i], y, p, f[i], fy[i], fp[i]);
    }
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      const double h = mesh[i + 1] - mesh[i];
      const Vector ya = x.segment(static_cast<Eigen::Index>(offset(k, i)), d);
      const Vector yb = x.segment(static_cast<Eigen::Index>(offset(k, i + 1)), d);
      const Vector ym = 0.5 * (ya + yb) - h / 8.0 * (f[i + 1] - f[i]);
      const double sm = mesh[i] + 0.5 * h;
      const Vector fm = rhs(k, sm, ym, p);
      Matrix fym, fpm;
      rhs_jacobian(k, sm, ym, p, fm, fym, fpm);
      const Matrix dA = -I - h / 6.0 * (fy[i] + 4.0 * fym * (0.5 * I + h / 8.0 * fy[i]));
      const Matrix dB = I - h / 6.0 * (fy[i + 1] + 4.0 * fym * (0.5 * I - h / 8.0 * fy[i + 1]));
      add_block(row, static_cast<Eigen::Index>(offset(k, i)), dA);
      add_block(row, static_cast<Eigen::Index>(offset(k, i + 1)), dB);
      if (np > 0) {
        const Matrix dP =
            -h / 6.0 * (fp[i] + 4.0 * (fpm - h / 8.0 * fym * (fp[i + 1] - fp[i])) + fp[i + 1]);
        add_block(row, pcol, dP);
      }
      row += d;
    }
  }

  // Boundary rows by forward differences over endpoint states and parameters.
  const Vector r0 = boundary_residual(x);
  const double sq = std::sqrt(std::numeric_limits<double>::epsilon());
  Vector xx = x;
  auto bc_column = [&](Eigen::Index col) {
    const double del = sq * (1.0 + std::abs(x[col]));
    xx[col] = x[col] + del;
    const Vector r1 = boundary_residual(xx);
    xx[col] = x[col];
    const Vector dcol = (r1 - r0) / del;
    for (Eigen::Index i = 0; i < dcol.size(); ++i) {
      if (dcol[i] != 0.0) trip.emplace_back(row + i, col, dcol[i]);
    }
  };
  for (std::size_t k = 0; k < meshes_.size(); ++k) {
    const auto d = static_cast<Eigen::Index>(problem_.phases[k].dimension);
    const auto left = static_cast<Eigen::Index>(offset(k, 0));
    const auto right = static_cast<Eigen::Index>(offset(k, meshes_[k].size() - 1));
    for (Eigen::Index j = 0; j < d; ++j) bc_column(left + j);
    for (Eigen::Index j = 0; j < d; ++j) bc_column(right + j);
  }
  for (Eigen::Index j = 0; j < np; ++j) bc_column(pcol + j);

  SparseMatrix J(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(size_));
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

// ---------------------------------------------------------------------------
// Newton

NewtonStep newton_step(NonlinearSystem& system, const Vector& x, double damping_floor) {
  const Vector F = system.residual(x);
  NewtonStep out;
  if (F.lpNorm<Eigen::Infinity>() == 0.0) {
    out.x = x;
    out.step = Vector::Zero(x.size());
    out.damping = 1.0;
    out.residual_norm = 0.0;
    return out;
  }
  SparseMatrix J = system.jacobian(x);
  J.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success) {
    throw NonconvergenceError("Newton: singular Jacobian (" + lu.lastErrorMessage() + ")");
  }
  const Vector step = -lu.solve(F);
  if (!step.allFinite()) throw NonconvergenceError("Newton: non-finite correction");
  out.step = step;
  const double level = scaled_l2(step, x);

  for (double lambda = 1.0; lambda >= damping_floor; lambda *= 0.5) {
    const Vector trial = x + lambda * step;
    Vector Ft;
    try {
      Ft = system.residual(trial);
    } catch (const Error&) {
      continue;  // trial left the domain of the residual
    }
    if (!Ft.allFinite()) continue;
    const Vector simplified = -lu.solve(Ft);
    const double trial_level = scaled_l2(simplified, x);
    // Natural monotonicity test on the Newton-corrected level function.
    if (trial_level <= (1.0 - 0.25 * lambda) * level || level < 1e-14) {
      out.x = trial;
      out.damping = lambda;
      out.residual_norm = Ft.lpNorm<Eigen::Infinity>();
      return out;
    }
  }
  throw NonconvergenceError("Newton: damping fell below the floor " +
                            format_double(damping_floor));
}

NewtonResult newton_solve(NonlinearSystem& system, Vector x, double step_tol,
                          std::size_t max_iterations, double damping_floor) {
  NewtonResult res;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const NewtonStep st = newton_step(system, x, damping_floor);
    const double sn = scaled_step_norm(st.step, x);
    x = st.x;
    res.iterations = it + 1;
    res.residual_norm = st.residual_norm;
    if (st.damping == 1.0 && sn <= step_tol) {
      res.x = std::move(x);
      return res;
    }
  }
  throw NonconvergenceError("Newton: no convergence after " + std::to_string(max_iterations) +
                            " iterations");
}


LmResult levenberg_marquardt(NonlinearSystem& system, Vector x, double target,
                             std::size_t max_iterations) {
  LmResult res;
  Vector F = system.residual(x);
  if (!F.allFinite()) throw NonconvergenceError("LM: non-finite residual at the start");
  double mu = 1e-3;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    res.iterations = it;
    if (F.lpNorm<Eigen::Infinity>() <= target) break;
    SparseMatrix J = system.jacobian(x);
    const SparseMatrix JtJ = SparseMatrix(J.transpose()) * J;
    const Vector g = J.transpose() * F;
    const Vector D = JtJ.diagonal().cwiseMax(1e-12);
    bool accepted = false;
    for (int k = 0; k < 40 && !accepted; ++k) {
      SparseMatrix A = JtJ;
      for (Eigen::Index i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += mu * D[i];
      Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
      if (ldlt.info() != Eigen::Success) {
        mu *= 4.0;
        continue;
      }
      const Vector trial = x - ldlt.solve(g);
      Vector Ft;
      try {
        Ft = system.residual(trial);
      } catch (const Error&) {
        mu *= 4.0;
        continue;
      }
      if (Ft.allFinite() && Ft.squaredNorm() < F.squaredNorm()) {
        x = trial;
        F = std::move(Ft);
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }
  res.residual_norm = F.lpNorm<Eigen::Infinity>();
  res.x = std::move(x);
  return res;
}

// ---------------------------------------------------------------------------
// Residual control and mesh adaptation

std::vector<Vector> estimate_residual(const BvpProblem& problem,
                                      const std::vector<PhaseSolution>& phases,
                                      const Vector& params, std::size_t* ode_evals) {
  std::vector<Vector> out;
  std::size_t evals = 0;
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const auto& ph = phases[k];
    const std::size_t n = ph.mesh.size() - 1;
    Vector res(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double h = ph.mesh[i + 1] - ph.mesh[i];
      double worst = 0.0;
      for (double t : {0.5 - kSampleOffset, 0.5 + kSampleOffset}) {
        const Vector S = hermite_value(t, h, ph.states[i], ph.slopes[i], ph.states[i + 1],
                                       ph.slopes[i + 1]);
        const Vector dS = hermite_slope(t, h, ph.states[i], ph.slopes[i], ph.states[i + 1],
                                        ph.slopes[i + 1]);
        const Vector f = problem.phases[k].rhs(ph.mesh[i] + t * h, S, params);
        ++evals;
        for (Eigen::Index c = 0; c < f.size(); ++c) {
          worst = std::max(worst, std::abs(dS[c] - f[c]) / (1.0 + std::abs(f[c])));
        }
      }
      res[static_cast<Eigen::Index>(i)] = worst;
    }
    out.push_back(std::move(res));
  }
  if (ode_evals) *ode_evals += evals;
  return out;
}

std::vector<double> refine_mesh(const std::vector<double>& mesh, const Vector& residuals,
                                double tol, std::size_t max_nodes) {
  check_mesh(mesh);
  if (static_cast<std::size_t>(residuals.size()) + 1 != mesh.size()) {
    throw PreconditionError("refine_mesh: one residual per interval is required");
  }
  if (residuals.maxCoeff() <= tol) return mesh;

  const double merge_below = 0.01 * tol;
  std::vector<double> out{mesh.front()};
  const std::size_t n = mesh.size() - 1;
  for (std::size_t i = 0; i < n;) {
    const double r = residuals[static_cast<Eigen::Index>(i)];
    const double a = mesh[i], b = mesh[i + 1];
    if (r > tol) {
      const int parts = r > 100.0 * tol ? 3 : 2;
      for (int j = 1; j < parts; ++j) out.push_back(a + (b - a) * j / parts);
      out.push_back(b);
      ++i;
    } else if (i + 1 < n && r < merge_below &&
               residuals[static_cast<Eigen::Index>(i + 1)] < merge_below) {
      out.push_back(mesh[i + 2]);
      i += 2;
    } else {
      out.push_back(b);
      ++i;
    }
  }
  if (out.size() > max_nodes) {
    throw MeshOverflowError("mesh refinement needs " + std::to_string(out.size()) +
                            " nodes, budget is " + std::to_string(max_nodes));
  }
  return out;
}

// ---------------------------------------------------------------------------

BvpSolution solve(const BvpProblem& problem, const BvpGuess& guess, const SolverOptions& opt) {
  if (!(opt.tol >= 1e-12 && opt.tol <= 1e-3)) {
    throw PreconditionError("bvp solve: tol must lie in [1e-12, 1e-3]");
  }
  if (guess.phases.size() != problem.phases.size()) {
    throw PreconditionError("bvp solve: guess has the wrong number of phases");
  }
  if (static_cast<std::size_t>(guess.params.size()) != problem.n_params) {
    throw PreconditionError("bvp solve: guess has the wrong number of parameters");
  }
  std::vector<std::vector<double>> meshes;
  std::vector<PhaseSolution> current;
  for (std::size_t k = 0; k < problem.phases.size(); ++k) {
    const auto& g = guess.phases[k];
    check_mesh(g.mesh);
    if (g.mesh.front() != 0.0 || g.mesh.back() != 1.0) {
      throw PreconditionError("bvp solve: every phase mesh must span [0, 1]");
    }
    if (g.states.size() != g.mesh.size()) {
      throw PreconditionError("bvp solve: one guess state per mesh node is required");
    }
    for (const auto& y : g.states) {
      if (static_cast<std::size_t>(y.size()) != problem.phases[k].dimension) {
        throw PreconditionError("bvp solve: guess state has the wrong dimension");
      }
    }
    PhaseSolution ps;
    ps.mesh = g.mesh;
    ps.states = g.states;
    for (std::size_t i = 0; i < g.mesh.size(); ++i) {
      ps.slopes.push_back(problem.phases[k].rhs(g.mesh[i], g.states[i], guess.params));
    }
    current.push_back(std::move(ps));
    meshes.push_back(g.mesh);
  }

  BvpSolution sol;
  sol.params = guess.params;
  sol.phases = current;
  const double step_tol = std::min(1e-10, 1e-3 * opt.tol);
  auto log = [&](const std::string& line) {
    if (opt.verbosity > 0 && opt.log) *opt.log << line << '\n';
  };

  for (std::size_t pass = 0;; ++pass) {
    CollocationSystem sys(problem, meshes);
    Vector x = sys.pack(current, sol.params);
    try {
      NewtonResult nr;
      try {
        nr = newton_solve(sys, x, step_tol, opt.max_newton_iterations, opt.damping_floor);
      } catch (const NonconvergenceError&) {
        // Restart from the same iterate under a least-squares globalisation,
        // then let Newton finish.
        if (opt.verbosity > 1) log("pass " + std::to_string(pass) + ": Newton fallback to LM");
        const LmResult lm = levenberg_marquardt(sys, x, opt.lm_target, opt.max_lm_iterations);
        sol.diagnostics.lm_iters += lm.iterations;
        nr = newton_solve(sys, lm.x, step_tol, opt.max_newton_iterations, opt.damping_floor);
      }
      sol.diagnostics.newton_iters += nr.iterations;
      x = nr.x;
    } catch (const NonconvergenceError& e) {
      sol.diagnostics.ode_evals += sys.ode_evals();
      sol.diagnostics.bc_evals += sys.bc_evals();
      sol.converged = false;
      throw BvpFailure(std::string("bvp solve: ") + e.what(), FailureKind::Newton, sol);
    }
    Vector params;
    current = sys.unpack(x, &params);
    sol.diagnostics.ode_evals += sys.ode_evals();
    const Vector bc = sys.boundary_residual(x);
    sol.diagnostics.bc_evals += sys.bc_evals();

    const auto residuals = estimate_residual(problem, current, params, &sol.diagnostics.ode_evals);
    double max_res = 0.0;
    for (const auto& r : residuals) max_res = std::max(max_res, r.maxCoeff());

    sol.phases = current;
    sol.params = params;
    sol.max_residual = max_res;
    sol.max_bc_residual = bc.lpNorm<Eigen::Infinity>();
    sol.diagnostics.refinements = pass;

    if (opt.verbosity > 1) {
      log("pass " + std::to_string(pass) + ": " + std::to_string(sol.total_nodes()) +
          " nodes, max residual " + format_double(max_res));
    }
    if (max_res <= opt.tol && sol.max_bc_residual <= opt.tol) {
      sol.converged = true;
      break;
    }
    if (!opt.adapt) {
      sol.converged = false;
      return sol;
    }
    if (pass + 1 > opt.max_refinements) {
      throw BvpFailure("bvp solve: residual " + format_double(max_res) +
                           " above tolerance after the refinement budget",
                       FailureKind::RefinementLimit, sol);
    }
    try {
      for (std::size_t k = 0; k < meshes.size(); ++k) {
        meshes[k] = refine_mesh(meshes[k], residuals[k], opt.tol, opt.max_nodes);
      }
    } catch (const MeshOverflowError& e) {
      throw BvpFailure(e.what(), FailureKind::MeshOverflow, sol);
    }
  }

  log("The solution was obtained on a mesh of " + std::to_string(sol.total_nodes()) + " points.");
  log("The maximum residual is " + format_double(sol.max_residual) + ".");
  log("There were " + std::to_string(sol.diagnostics.ode_evals) + " calls to the ODE function.");
  log("There were " + std::to_string(sol.diagnostics.bc_evals) + " calls to the BC function.");
  return sol;
}

}  // namespace hohmann::bvp
