#include "hohmann/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "hohmann/errors.hpp"
#include "hohmann/hohmann_analytic.hpp"
#include "hohmann/kkt_solver.hpp"
#include "hohmann/verification.hpp"
#include "json.hpp"

namespace hohmann::scenario {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view text, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    fail_at(line, "not a finite number: '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text, std::size_t line) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    fail_at(line, "not a non-negative integer: '" + std::string(text) + "'");
  }
  return v;
}

Vec3 parse_vec(std::string_view text, std::size_t line) {
  Vec3 v;
  int n = 0;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view part = text.substr(0, comma);
    if (n == 3) fail_at(line, "vector needs exactly three components");
    v[n++] = parse_number(part, line);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (n != 3) fail_at(line, "vector needs exactly three components");
  return v;
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

std::string vec_text(const Vec3& v) { return g17(v[0]) + ", " + g17(v[1]) + ", " + g17(v[2]); }

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("summary: vector field is malformed");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

GravField field_of(const ScenarioConfig& c) { return GravField(c.mu); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  out << content;
  if (!out) throw ConfigError("cannot write output file " + path.string());
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Analytic: return "analytic";
    case Mode::Kkt: return "kkt";
    case Mode::Bvp1: return "bvp1";
    case Mode::Bvp2: return "bvp2";
    case Mode::Verify: return "verify";
  }
  return "analytic";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::Analytic, Mode::Kkt, Mode::Bvp1, Mode::Bvp2, Mode::Verify}) {
    if (to_string(m) == text) return m;
  }
  throw ConfigError("unknown mode '" + std::string(text) + "'");
}

double OrbitSpec::radius(double reference_radius) const {
  return kind == Kind::Radius ? value : reference_radius + value;
}

double ScenarioConfig::r0() const {
  if (!initial) throw ConfigError("initial orbit missing (r0 or altitude0)");
  return initial->radius(reference_radius);
}

double ScenarioConfig::rf() const {
  if (!final) throw ConfigError("final orbit missing (rf or altitudef)");
  return final->radius(reference_radius);
}

transfer::TransferGuess ScenarioConfig::resolved_guess() const {
  transfer::TransferGuess g;
  if (!guess_preset.empty()) {
    g = transfer::preset_guess(guess_preset);
  } else {
    g.name = "explicit";
  }
  if (guess.dv0) g.dv0 = *guess.dv0;
  if (guess.dv1) g.dv1 = *guess.dv1;
  if (guess.p_r) g.costate.p_r = *guess.p_r;
  if (guess.p_v) g.costate.p_v = *guess.p_v;
  if (guess.switch_value) g.switch_value = *guess.switch_value;
  if (guess.nodes) g.mesh_nodes = *guess.nodes;
  if (guess.profile) g.profile = *guess.profile;
  return g;
}

std::string ScenarioConfig::summary_file() const {
  return summary_path.empty() ? name + "-summary.json" : summary_path;
}

std::string ScenarioConfig::trajectory_file() const {
  return trajectory_path.empty() ? name + "-trajectory.csv" : trajectory_path;
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  bool have_mode = false;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail_at(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(line_no, "empty key");
    if (value.empty()) fail_at(line_no, "empty value for '" + key + "'");
    if (!seen.emplace(key, line_no).second) fail_at(line_no, "duplicate key '" + key + "'");

    if (key == "mode") {
      try {
        c.mode = parse_mode(value);
      } catch (const ConfigError& e) {
        fail_at(line_no, e.what());
      }
      have_mode = true;
    } else if (key == "name") {
      if (!valid_name(value)) fail_at(line_no, "name may only contain [A-Za-z0-9._-]");
      c.name = value;
    } else if (key == "mu") {
      c.mu = parse_number(value, line_no);
    } else if (key == "reference_radius") {
      c.reference_radius = parse_number(value, line_no);
    } else if (key == "r0" || key == "altitude0") {
      if (c.initial) fail_at(line_no, "give exactly one of r0 and altitude0");
      c.initial = OrbitSpec{key == "r0" ? OrbitSpec::Kind::Radius : OrbitSpec::Kind::Altitude,
                            parse_number(value, line_no)};
    } else if (key == "rf" || key == "altitudef") {
      if (c.final) fail_at(line_no, "give exactly one of rf and altitudef");
      c.final = OrbitSpec{key == "rf" ? OrbitSpec::Kind::Radius : OrbitSpec::Kind::Altitude,
                          parse_number(value, line_no)};
    } else if (key == "tf") {
      c.tf = parse_number(value, line_no);
    } else if (key == "guess") {
      c.guess_preset = value;
    } else if (key == "guess.dv0") {
      c.guess.dv0 = parse_vec(value, line_no);
    } else if (key == "guess.dv1") {
      c.guess.dv1 = parse_vec(value, line_no);
    } else if (key == "guess.p_r") {
      c.guess.p_r = parse_vec(value, line_no);
    } else if (key == "guess.p_v") {
      c.guess.p_v = parse_vec(value, line_no);
    } else if (key == "guess.switch") {
      c.guess.switch_value = parse_number(value, line_no);
    } else if (key == "guess.nodes") {
      c.guess.nodes = parse_count(value, line_no);
    } else if (key == "guess.profile") {
      if (value == "propagated") {
        c.guess.profile = transfer::GuessProfile::Propagated;
      } else if (value == "constant") {
        c.guess.profile = transfer::GuessProfile::Constant;
      } else {
        fail_at(line_no, "guess.profile must be propagated or constant");
      }
    } else if (key == "tol") {
      c.tol = parse_number(value, line_no);
    } else if (key == "max_nodes") {
      c.max_nodes = parse_count(value, line_no);
    } else if (key == "summary") {
      c.summary_path = value;
    } else if (key == "trajectory") {
      c.trajectory_path = value;
    } else if (key == "filter") {
      c.filter = value;
    } else {
      fail_at(line_no, "unknown key '" + key + "'");
    }
  }
  if (!have_mode) throw ConfigError("config: 'mode' is required");
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ScenarioConfig& c) {
  if (!valid_name(c.name)) throw ConfigError("name may only contain [A-Za-z0-9._-]");
  if (!(c.mu > 0.0)) throw ConfigError("mu must be positive");
  if (!(c.reference_radius > 0.0)) throw ConfigError("reference_radius must be positive");
  if (c.tf && c.mode != Mode::Bvp2) throw ConfigError("tf only applies to mode bvp2");
  const bool bvp = c.mode == Mode::Bvp1 || c.mode == Mode::Bvp2;
  if (!bvp && (!c.guess_preset.empty() || c.guess != GuessOverrides{})) {
    throw ConfigError("guess keys only apply to bvp modes");
  }
  if (c.mode != Mode::Verify && !c.filter.empty()) {
    throw ConfigError("filter only applies to mode verify");
  }
  if (c.mode == Mode::Verify) {
    verification::parse_filter(c.filter);
    return;
  }
  const double r0 = c.r0();
  const double rf = c.rf();
  if (!(r0 > 0.0) || !(rf > 0.0)) throw ConfigError("orbit radii must be positive");
  if (!(rf > r0)) throw ConfigError("final orbit must lie outside the initial orbit");
  if (!(c.tol >= 1e-12 && c.tol <= 1e-3)) throw ConfigError("tol must lie in [1e-12, 1e-3]");
  if (bvp) {
    if (c.max_nodes < 2) throw ConfigError("max_nodes must be at least 2");
    if (!c.guess_preset.empty()) {
      bool known = false;
      for (const auto& n : transfer::preset_guess_names()) known = known || n == c.guess_preset;
      if (!known) throw ConfigError("unknown guess preset '" + c.guess_preset + "'");
    } else if (!c.guess.dv0 || !c.guess.dv1 || !c.guess.switch_value) {
      throw ConfigError("without a guess preset, guess.dv0, guess.dv1 and guess.switch are required");
    }
    if (c.guess.nodes && *c.guess.nodes < 2) throw ConfigError("guess.nodes must be at least 2");
  }
  if (c.mode == Mode::Bvp2) {
    if (!c.tf) throw ConfigError("mode bvp2 requires tf");
    const double t_ht = transfer_time(r0, rf, field_of(c));
    if (!(*c.tf > t_ht)) {
      throw ConfigError("tf must exceed the Hohmann transfer time " + g17(t_ht) + " s");
    }
  }
}

std::string serialize(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "mode = " << to_string(c.mode) << '\n';
  os << "name = " << c.name << '\n';
  os << "mu = " << g17(c.mu) << '\n';
  os << "reference_radius = " << g17(c.reference_radius) << '\n';
  if (c.initial) {
    os << (c.initial->kind == OrbitSpec::Kind::Radius ? "r0" : "altitude0") << " = "
       << g17(c.initial->value) << '\n';
  }
  if (c.final) {
    os << (c.final->kind == OrbitSpec::Kind::Radius ? "rf" : "altitudef") << " = "
       << g17(c.final->value) << '\n';
  }
  if (c.tf) os << "tf = " << g17(*c.tf) << '\n';
  if (!c.guess_preset.empty()) os << "guess = " << c.guess_preset << '\n';
  if (c.guess.dv0) os << "guess.dv0 = " << vec_text(*c.guess.dv0) << '\n';
  if (c.guess.dv1) os << "guess.dv1 = " << vec_text(*c.guess.dv1) << '\n';
  if (c.guess.p_r) os << "guess.p_r = " << vec_text(*c.guess.p_r) << '\n';
  if (c.guess.p_v) os << "guess.p_v = " << vec_text(*c.guess.p_v) << '\n';
  if (c.guess.switch_value) os << "guess.switch = " << g17(*c.guess.switch_value) << '\n';
  if (c.guess.nodes) os << "guess.nodes = " << *c.guess.nodes << '\n';
  if (c.guess.profile) {
    os << "guess.profile = "
       << (*c.guess.profile == transfer::GuessProfile::Constant ? "constant" : "propagated")
       << '\n';
  }
  os << "tol = " << g17(c.tol) << '\n';
  os << "max_nodes = " << c.max_nodes << '\n';
  if (!c.summary_path.empty()) os << "summary = " << c.summary_path << '\n';
  if (!c.trajectory_path.empty()) os << "trajectory = " << c.trajectory_path << '\n';
  if (!c.filter.empty()) os << "filter = " << c.filter << '\n';
  return os.str();
}

namespace {

ScenarioConfig example_orbits(Mode mode, std::string name, bool example1) {
  ScenarioConfig c;
  c.mode = mode;
  c.name = std::move(name);
  if (example1) {
    c.initial = OrbitSpec{OrbitSpec::Kind::Altitude, 300000.0};
    c.final = OrbitSpec{OrbitSpec::Kind::Radius, 42164000.0};
  } else {
    c.initial = OrbitSpec{OrbitSpec::Kind::Altitude, 200000.0};
    c.final = OrbitSpec{OrbitSpec::Kind::Altitude, 400000.0};
  }
  return c;
}

std::map<std::string, ScenarioConfig, std::less<>> make_scenarios() {
  std::map<std::string, ScenarioConfig, std::less<>> m;
  auto add = [&](ScenarioConfig c) { m.emplace(c.name, std::move(c)); };
  add(example_orbits(Mode::Analytic, "example1-analytic", true));
  add(example_orbits(Mode::Analytic, "example2-analytic", false));
  add(example_orbits(Mode::Kkt, "example1-kkt", true));
  add(example_orbits(Mode::Kkt, "example2-kkt", false));
  for (const char* n : {"example1-hohmann", "example1-retrograde"}) {
    ScenarioConfig c = example_orbits(Mode::Bvp1, n, true);
    c.guess_preset = n;
    c.tol = 1e-8;
    add(c);
  }
  for (const char* n : {"example2-hohmann", "example2-retrograde", "example2-small-retrograde"}) {
    ScenarioConfig c = example_orbits(Mode::Bvp2, n, false);
    c.guess_preset = n;
    c.tf = 2800.0;
    c.tol = 1e-8;
    add(c);
  }
  ScenarioConfig v;
  v.mode = Mode::Verify;
  v.name = "verify";
  add(v);
  return m;
}

const std::map<std::string, ScenarioConfig, std::less<>>& scenarios() {
  static const auto m = make_scenarios();
  return m;
}

}  // namespace

ScenarioConfig preset_scenario(std::string_view name) {
  const auto& m = scenarios();
  auto it = m.find(name);
  if (it == m.end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> preset_scenario_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : scenarios()) out.push_back(k);
  return out;
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::Global: return "global";
    case Branch::Local: return "local";
    case Branch::Unclassified: return "unclassified";
    case Branch::NotApplicable: return "n/a";
  }
  return "n/a";
}

Branch parse_branch(std::string_view text) {
  for (Branch b : {Branch::Global, Branch::Local, Branch::Unclassified, Branch::NotApplicable}) {
    if (to_string(b) == text) return b;
  }
  throw ConfigError("unknown branch label '" + std::string(text) + "'");
}

Branch classify(double cost, double r0, double rf, const GravField& field, double rel_tol) {
  if (!(rf > r0) || !(r0 > 0.0)) return Branch::Unclassified;
  const double v0 = circular_velocity(r0, field);
  const auto [pro, retro] = kkt::stationary_points(rf / r0);
  if (std::abs(cost - pro.cost * v0) <= rel_tol * pro.cost * v0) return Branch::Global;
  if (std::abs(cost - retro.cost * v0) <= rel_tol * retro.cost * v0) return Branch::Local;
  return Branch::Unclassified;
}

// ---------------------------------------------------------------------------
// Summaries

std::string to_json(const RunSummary& s) {
  json j;
  j["mode"] = s.mode;
  j["name"] = s.name;
  j["status"] = s.status;
  j["message"] = s.message;
  j["inputs"] = {{"mu", s.mu},   {"r0", s.r0},   {"rf", s.rf},
                 {"tf", s.tf},   {"tol", s.tol}, {"guess_preset", s.guess_preset}};
  j["dv0"] = vec_json(s.dv0);
  j["dv1"] = vec_json(s.dv1);
  j["cost"] = s.cost;
  j["t1"] = s.t1;
  j["t_ht"] = s.t_ht;
  j["tau1"] = s.tau1;
  j["hohmann"] = {{"dv0", s.hohmann_dv0}, {"dv1", s.hohmann_dv1}};
  j["branch"] = s.branch;
  j["solver"] = {{"converged", s.converged},
                 {"mesh_points", s.mesh_points},
                 {"max_residual", s.max_residual},
                 {"max_bc_residual", s.max_bc_residual},
                 {"ode_evals", s.ode_evals},
                 {"bc_evals", s.bc_evals},
                 {"newton_iters", s.newton_iters},
                 {"lm_iters", s.lm_iters},
                 {"refinements", s.refinements},
                 {"hamiltonian_jump", s.hamiltonian_jump},
                 {"interior_diagnostic", s.interior_diagnostic}};
  j["seconds"] = s.seconds;
  if (s.kkt) {
    const KktSummary& k = *s.kkt;
    j["kkt"] = {{"rbar_f", k.rbar_f},
                {"prograde",
                 {{"x0", k.prograde_x0},
                  {"y0", k.prograde_y0},
                  {"lambda", k.prograde_lambda},
                  {"cost", k.prograde_cost},
                  {"residual", k.prograde_residual},
                  {"curvature", k.prograde_curvature},
                  {"strict_min", k.prograde_strict_min}}},
                {"retrograde",
                 {{"x0", k.retrograde_x0},
                  {"y0", k.retrograde_y0},
                  {"lambda", k.retrograde_lambda},
                  {"cost", k.retrograde_cost},
                  {"residual", k.retrograde_residual},
                  {"curvature", k.retrograde_curvature},
                  {"strict_min", k.retrograde_strict_min}}}};
  }
  json crit = json::array();
  for (const auto& c : s.criteria) crit.push_back({{"id", c.id}, {"passed", c.passed}, {"text", c.text}});
  j["criteria"] = crit;
  j["files"] = s.files;
  return j.dump(2) + "\n";
}

RunSummary summary_from_json(std::string_view text) {
  try {
    const json j = json::parse(text.begin(), text.end());
    RunSummary s;
    s.mode = j.at("mode").get<std::string>();
    s.name = j.at("name").get<std::string>();
    s.status = j.at("status").get<std::string>();
    s.message = j.at("message").get<std::string>();
    const json& in = j.at("inputs");
    s.mu = in.at("mu").get<double>();
    s.r0 = in.at("r0").get<double>();
    s.rf = in.at("rf").get<double>();
    s.tf = in.at("tf").get<double>();
    s.tol = in.at("tol").get<double>();
    s.guess_preset = in.at("guess_preset").get<std::string>();
    s.dv0 = vec_from(j.at("dv0"));
    s.dv1 = vec_from(j.at("dv1"));
    s.cost = j.at("cost").get<double>();
    s.t1 = j.at("t1").get<double>();
    s.t_ht = j.at("t_ht").get<double>();
    s.tau1 = j.at("tau1").get<double>();
    s.hohmann_dv0 = j.at("hohmann").at("dv0").get<double>();
    s.hohmann_dv1 = j.at("hohmann").at("dv1").get<double>();
    s.branch = j.at("branch").get<std::string>();
    const json& sv = j.at("solver");
    s.converged = sv.at("converged").get<bool>();
    s.mesh_points = sv.at("mesh_points").get<std::size_t>();
    s.max_residual = sv.at("max_residual").get<double>();
    s.max_bc_residual = sv.at("max_bc_residual").get<double>();
    s.ode_evals = sv.at("ode_evals").get<std::size_t>();
    s.bc_evals = sv.at("bc_evals").get<std::size_t>();
    s.newton_iters = sv.at("newton_iters").get<std::size_t>();
    s.lm_iters = sv.at("lm_iters").get<std::size_t>();
    s.refinements = sv.at("refinements").get<std::size_t>();
    s.hamiltonian_jump = sv.at("hamiltonian_jump").get<double>();
    s.interior_diagnostic = sv.at("interior_diagnostic").get<double>();
    s.seconds = j.at("seconds").get<double>();
    if (j.contains("kkt")) {
      const json& k = j.at("kkt");
      KktSummary ks;
      ks.rbar_f = k.at("rbar_f").get<double>();
      const json& p = k.at("prograde");
      const json& r = k.at("retrograde");
      ks.prograde_x0 = p.at("x0").get<double>();
      ks.prograde_y0 = p.at("y0").get<double>();
      ks.prograde_lambda = p.at("lambda").get<double>();
      ks.prograde_cost = p.at("cost").get<double>();
      ks.prograde_residual = p.at("residual").get<double>();
      ks.prograde_curvature = p.at("curvature").get<double>();
      ks.prograde_strict_min = p.at("strict_min").get<bool>();
      ks.retrograde_x0 = r.at("x0").get<double>();
      ks.retrograde_y0 = r.at("y0").get<double>();
      ks.retrograde_lambda = r.at("lambda").get<double>();
      ks.retrograde_cost = r.at("cost").get<double>();
      ks.retrograde_residual = r.at("residual").get<double>();
      ks.retrograde_curvature = r.at("curvature").get<double>();
      ks.retrograde_strict_min = r.at("strict_min").get<bool>();
      s.kkt = ks;
    }
    for (const auto& c : j.at("criteria")) {
      s.criteria.push_back({c.at("id").get<int>(), c.at("passed").get<bool>(),
                            c.at("text").get<std::string>()});
    }
    s.files = j.at("files").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("summary JSON: ") + e.what());
  }
}

std::string to_text(const RunSummary& s) {
  std::ostringstream os;
  char buf[256];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    os << buf << '\n';
  };
  os << s.name << " (" << s.mode << "): " << s.status << '\n';
  if (!s.message.empty()) os << s.message << '\n';
  if (s.mode == "verify") {
    for (const auto& c : s.criteria) os << c.text << '\n';
    return os.str();
  }
  if (s.mode == "bvp1" || s.mode == "bvp2") {
    line("The solution was obtained on a mesh of %zu points.", s.mesh_points);
    line("The maximum residual is %10.3e.", s.max_residual);
    line("There were %zu calls to the ODE function.", s.ode_evals);
    line("There were %zu calls to the BC function.", s.bc_evals);
    line("Elapsed time is %f seconds.", s.seconds);
  }
  line("The first velocity impulse vector dv1 = [%.15f, %.15f, %.15f]", s.dv0[0], s.dv0[1], s.dv0[2]);
  line("The second velocity impulse vector dv2 = [%.15f, %.15f, %.15f]", s.dv1[0], s.dv1[1],
       s.dv1[2]);
  if (s.mode == "bvp2") line("The scaled instant of the second velocity impulse %.15f", s.tau1);
  line("The time instant of the second velocity impulse %.15e", s.t1);
  line("The Hohmann transfer time %.15e", s.t_ht);
  line("Total cost %.15e m/s, branch %s", s.cost, s.branch.c_str());
  if (s.mode == "bvp1" || s.mode == "bvp2") {
    line("The maximal error of boundary conditions %e", s.max_bc_residual);
  }
  if (s.kkt) {
    const KktSummary& k = *s.kkt;
    line("rbar_f = %.17g", k.rbar_f);
    line("prograde:   y0 = %.17g  lambda = %.17g  cost = %.17g  curvature = %.6g  strict min = %s",
         k.prograde_y0, k.prograde_lambda, k.prograde_cost, k.prograde_curvature,
         k.prograde_strict_min ? "yes" : "no");
    line("retrograde: y0 = %.17g  lambda = %.17g  cost = %.17g  curvature = %.6g  strict min = %s",
         k.retrograde_y0, k.retrograde_lambda, k.retrograde_cost, k.retrograde_curvature,
         k.retrograde_strict_min ? "yes" : "no");
  }
  for (const auto& f : s.files) os << "wrote " << f << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

std::string trajectory_csv(const transfer::ExtractedTransfer& tr) {
  std::ostringstream os;
  os << "t,rx,ry,rz,vx,vy,vz,p_rx,p_ry,p_rz,p_vx,p_vy,p_vz,primer\n";
  for (const auto& n : tr.nodes) {
    const auto& c = n.scaled.costate;
    os << g17(n.t);
    for (const Vec3* v : {&n.dimensional.r, &n.dimensional.v, &c.p_r, &c.p_v}) {
      for (int i = 0; i < 3; ++i) os << ',' << g17((*v)[i]);
    }
    os << ',' << g17(c.p_v.norm()) << '\n';
  }
  return os.str();
}

std::vector<SweepRow> sweep(double lo, double hi, std::size_t n) {
  if (!(lo > 1.0) || !std::isfinite(hi)) throw DomainError("sweep: ratios must exceed 1");
  if (!(hi >= lo)) throw DomainError("sweep: upper ratio below lower ratio");
  if (n == 0) throw DomainError("sweep: at least one row is required");
  std::vector<SweepRow> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    const double rbar =
        n == 1 ? lo : (i + 1 == n ? hi : std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
    const auto [pro, retro] = kkt::stationary_points(rbar);
    out.push_back({rbar, pro.point.y0, retro.point.y0, pro.cost, retro.cost});
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "rbar_f,y0_prograde,y0_retrograde,cost_prograde,cost_retrograde\n";
  for (const auto& r : rows) {
    os << g17(r.rbar_f) << ',' << g17(r.y0_prograde) << ',' << g17(r.y0_retrograde) << ','
       << g17(r.cost_prograde) << ',' << g17(r.cost_retrograde) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void fill_from_solution(RunSummary& s, const bvp::BvpSolution& sol) {
  s.converged = sol.converged;
  s.mesh_points = sol.total_nodes();
  s.max_residual = sol.max_residual;
  s.max_bc_residual = sol.max_bc_residual;
  s.ode_evals = sol.diagnostics.ode_evals;
  s.bc_evals = sol.diagnostics.bc_evals;
  s.newton_iters = sol.diagnostics.newton_iters;
  s.lm_iters = sol.diagnostics.lm_iters;
  s.refinements = sol.diagnostics.refinements;
}

RunStatus run_bvp(const ScenarioConfig& c, RunSummary& s, const std::filesystem::path& dir,
                  std::ostream* log) {
  const GravField field = field_of(c);
  const double r0 = c.r0();
  const double rf = c.rf();
  const Vec3 r0v(r0, 0.0, 0.0);
  const Vec3 v0v(0.0, circular_velocity(r0, field), 0.0);
  transfer::TransferProblem tp;
  try {
    const auto guess = c.resolved_guess();
    tp = c.mode == Mode::Bvp1 ? transfer::build_problem1(r0v, v0v, rf, field, guess)
                              : transfer::build_problem2(r0v, v0v, rf, *c.tf, field, guess);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid guess: ") + e.what());
  } catch (const DegeneracyError& e) {
    throw ConfigError(std::string("invalid guess: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("invalid guess: ") + e.what());
  }
  bvp::SolverOptions opt;
  opt.tol = c.tol;
  opt.max_nodes = c.max_nodes;
  opt.verbosity = log ? 1 : 0;
  opt.log = log;
  bvp::BvpSolution sol;
  try {
    sol = bvp::solve(tp.problem, tp.guess, opt);
  } catch (const bvp::BvpFailure& e) {
    fill_from_solution(s, e.last_iterate());
    s.status = "nonconvergence";
    s.message = e.what();
    return RunStatus::Nonconvergence;
  } catch (const NonconvergenceError& e) {
    s.status = "nonconvergence";
    s.message = e.what();
    return RunStatus::Nonconvergence;
  }
  fill_from_solution(s, sol);
  const auto tr = transfer::extract_plan(sol, tp);
  s.dv0 = tr.plan.dv0;
  s.dv1 = tr.plan.dv1;
  s.cost = tr.plan.total_cost;
  s.t1 = tr.plan.t_impulse_1;
  s.tau1 = c.mode == Mode::Bvp2 ? tr.switch_value : 0.0;
  s.hamiltonian_jump = tr.hamiltonian_jump;
  s.interior_diagnostic = tr.interior_diagnostic;
  s.branch = std::string(to_string(classify(s.cost, r0, rf, field)));
  const auto path = dir / c.trajectory_file();
  write_file(path, trajectory_csv(tr));
  s.files.push_back(path.string());
  return RunStatus::Ok;
}

}  // namespace

RunResult run(const ScenarioConfig& c, const std::string& out_dir, std::ostream* log) {
  validate(c);
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());

  RunResult result;
  RunSummary& s = result.summary;
  s.mode = std::string(to_string(c.mode));
  s.name = c.name;
  s.mu = c.mu;
  s.tol = c.tol;
  s.guess_preset = c.guess_preset;

  if (c.mode == Mode::Verify) {
    const auto report = verification::run(c.filter, log);
    for (const auto& r : report.results) s.criteria.push_back({r.id, r.passed, r.summary_line()});
    if (!report.all_passed()) {
      s.status = "verification-failed";
      result.status = RunStatus::VerificationFailed;
    }
  } else {
    const GravField field = field_of(c);
    s.r0 = c.r0();
    s.rf = c.rf();
    s.tf = c.tf.value_or(0.0);
    const ImpulsivePlan hp = hohmann_plan(s.r0, s.rf, field);
    s.t_ht = transfer_time(s.r0, s.rf, field);
    s.hohmann_dv0 = hp.dv0.norm();
    s.hohmann_dv1 = hp.dv1.norm();
    if (c.mode == Mode::Analytic) {
      s.dv0 = hp.dv0;
      s.dv1 = hp.dv1;
      s.cost = hp.total_cost;
      s.t1 = hp.t_impulse_1;
      s.branch = "global";
      s.converged = true;
    } else if (c.mode == Mode::Kkt) {
      const double rbar = s.rf / s.r0;
      const double v0 = circular_velocity(s.r0, field);
      const auto [pro, retro] = kkt::stationary_points(rbar);
      KktSummary k;
      k.rbar_f = rbar;
      k.prograde_x0 = pro.point.x0;
      k.prograde_y0 = pro.point.y0;
      k.prograde_lambda = pro.point.lambda;
      k.prograde_cost = pro.cost;
      k.prograde_residual = kkt::kkt_residuals(pro.point, rbar).max_abs();
      const auto hp_pro = kkt::projected_hessian_test(pro.point, rbar);
      k.prograde_curvature = hp_pro.curvature;
      k.prograde_strict_min = hp_pro.is_strict_local_min;
      k.retrograde_x0 = retro.point.x0;
      k.retrograde_y0 = retro.point.y0;
      k.retrograde_lambda = retro.point.lambda;
      k.retrograde_cost = retro.cost;
      k.retrograde_residual = kkt::kkt_residuals(retro.point, rbar).max_abs();
      const auto hp_retro = kkt::projected_hessian_test(retro.point, rbar);
      k.retrograde_curvature = hp_retro.curvature;
      k.retrograde_strict_min = hp_retro.is_strict_local_min;
      s.kkt = k;
      s.dv0 = Vec3(0.0, pro.point.y0 * v0, 0.0);
      s.dv1 = hp.dv1;
      s.cost = pro.cost * v0;
      s.t1 = s.t_ht;
      s.branch = "global";
      s.converged = true;
    } else {
      result.status = run_bvp(c, s, dir, log);
    }
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  const auto summary_path = dir / c.summary_file();
  s.files.push_back(summary_path.string());
  write_file(summary_path, to_json(s));
  return result;
}

}  // namespace hohmann::scenario
