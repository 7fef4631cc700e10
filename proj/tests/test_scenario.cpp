#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hohmann/errors.hpp"
#include "hohmann/kkt_solver.hpp"
#include "hohmann/scenario.hpp"
#include "hohmann/verification.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace hohmann;
using namespace hohmann::scenario;
using testing_support::rel_err;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hohmann-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, ParsesMinimalAnalytic) {
  const auto c = parse_config("mode = analytic\nr0 = 7000000\nrf = 8000000\n");
  EXPECT_EQ(c.mode, Mode::Analytic);
  EXPECT_DOUBLE_EQ(c.r0(), 7e6);
  EXPECT_DOUBLE_EQ(c.rf(), 8e6);
  EXPECT_DOUBLE_EQ(c.mu, kEarthMu);
}

TEST(Config, AltitudesUseReferenceRadius) {
  const auto c = parse_config(
      "# comment\nmode = kkt\n\nreference_radius = 1000\naltitude0 = 10   # trailing\naltitudef = 20\n");
  EXPECT_DOUBLE_EQ(c.r0(), 1010.0);
  EXPECT_DOUBLE_EQ(c.rf(), 1020.0);
}

TEST(Config, GuessOverrides) {
  const auto c = parse_config(
      "mode = bvp1\naltitude0 = 300000\nrf = 42164000\nguess = example1-hohmann\n"
      "guess.dv0 = 0, 2400, 0\nguess.switch = 9000\nguess.nodes = 60\nguess.profile = constant\n");
  const auto g = c.resolved_guess();
  EXPECT_EQ(g.dv0, Vec3(0, 2400, 0));
  EXPECT_DOUBLE_EQ(g.switch_value, 9000.0);
  EXPECT_EQ(g.mesh_nodes, 60u);
  EXPECT_EQ(g.profile, transfer::GuessProfile::Constant);
  // untouched fields come from the preset
  EXPECT_EQ(g.dv1, transfer::preset_guess("example1-hohmann").dv1);
}

struct BadConfig {
  const char* text;
  const char* why;
};

class MalformedConfig : public ::testing::TestWithParam<BadConfig> {};

TEST_P(MalformedConfig, Rejected) {
  EXPECT_THROW(parse_config(GetParam().text), ConfigError) << GetParam().why;
}

INSTANTIATE_TEST_SUITE_P(
    Cases, MalformedConfig,
    ::testing::Values(
        BadConfig{"r0 = 1\nrf = 2\n", "missing mode"},
        BadConfig{"mode = warp\nr0 = 1\nrf = 2\n", "unknown mode"},
        BadConfig{"mode = analytic\nr0 = 1\naltitude0 = 2\nrf = 3\n", "both radius and altitude"},
        BadConfig{"mode = analytic\nr0 = 1\n", "missing final orbit"},
        BadConfig{"mode = analytic\nr0 = 2\nrf = 1\n", "descending"},
        BadConfig{"mode = analytic\nr0 = 1\nrf = 2\nrf = 3\n", "duplicate key"},
        BadConfig{"mode = analytic\nr0 = 1\nrf = 2\ncolour = red\n", "unknown key"},
        BadConfig{"mode = analytic\nr0 = abc\nrf = 2\n", "bad number"},
        BadConfig{"mode = analytic\nr0 = 1\nrf = 2\ntf = 5\n", "tf outside bvp2"},
        BadConfig{"mode = bvp2\naltitude0 = 200000\naltitudef = 400000\nguess = example2-hohmann\n",
                  "bvp2 without tf"},
        BadConfig{"mode = bvp2\naltitude0 = 200000\naltitudef = 400000\ntf = 2000\n"
                  "guess = example2-hohmann\n",
                  "tf below transfer time"},
        BadConfig{"mode = bvp1\nr0 = 7e6\nrf = 8e6\nguess = nope\n", "unknown preset"},
        BadConfig{"mode = bvp1\nr0 = 7e6\nrf = 8e6\n", "no guess at all"},
        BadConfig{"mode = analytic\nr0 = 1\nrf = 2\nguess = example1-hohmann\n", "guess outside bvp"},
        BadConfig{"mode = analytic\nr0 = 1\nrf = 2\ntol = 1\n", "tolerance out of range"},
        BadConfig{"mode = bvp1\nr0 = 7e6\nrf = 8e6\nguess = example1-hohmann\nguess.dv0 = 1, 2\n",
                  "short vector"},
        BadConfig{"mode = analytic\nr0 = 1\nrf = 2\nfilter = 1\n", "filter outside verify"},
        BadConfig{"mode = analytic\nr0\nrf = 2\n", "missing equals"}));

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    parse_config("mode = analytic\nr0 = 1\nbogus = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, RoundTripAllPresets) {
  for (const auto& name : preset_scenario_names()) {
    const auto c = preset_scenario(name);
    EXPECT_EQ(parse_config(serialize(c)), c) << name;
  }
}

TEST(Config, RoundTripProperty) {
  testing_support::Rng g(51);
  for (int i = 0; i < 100; ++i) {
    ScenarioConfig c;
    c.mode = i % 2 ? Mode::Analytic : Mode::Bvp1;
    c.name = "case" + std::to_string(i);
    c.mu = testing_support::uniform(g, 1e13, 1e15);
    c.initial = OrbitSpec{OrbitSpec::Kind::Radius, testing_support::uniform(g, 6.5e6, 1e7)};
    c.final = OrbitSpec{i % 3 ? OrbitSpec::Kind::Radius : OrbitSpec::Kind::Altitude,
                        testing_support::uniform(g, 2e7, 5e7)};
    c.tol = std::exp(testing_support::uniform(g, std::log(1e-12), std::log(1e-3)));
    if (c.mode == Mode::Bvp1) {
      c.guess_preset = "example1-hohmann";
      c.guess.dv0 = Vec3(testing_support::uniform(g, -1, 1), 2000.0 / 3.0, 0.1);
      c.guess.switch_value = testing_support::uniform(g, 100, 20000);
    }
    EXPECT_EQ(parse_config(serialize(c)), c);
  }
}

TEST(Config, LoadFromFile) {
  const auto dir = scratch_dir("load");
  const auto path = dir / "a.cfg";
  std::ofstream(path) << "mode = analytic\nr0 = 7e6\nrf = 9e6\n";
  EXPECT_DOUBLE_EQ(load_config(path.string()).rf(), 9e6);
  EXPECT_THROW(load_config((dir / "missing.cfg").string()), ConfigError);
}

TEST(Config, PresetScenarios) {
  EXPECT_THROW(preset_scenario("nope"), ConfigError);
  const auto c = preset_scenario("example2-hohmann");
  EXPECT_EQ(c.mode, Mode::Bvp2);
  EXPECT_DOUBLE_EQ(*c.tf, 2800.0);
  EXPECT_DOUBLE_EQ(c.r0(), 6378145.0 + 200e3);
}

TEST(Summary, JsonRoundTrip) {
  RunSummary s;
  s.mode = "bvp2";
  s.name = "x";
  s.status = "nonconvergence";
  s.message = "quote \" and newline\n";
  s.mu = 1.5;
  s.dv0 = Vec3(0.1, 1.0 / 3.0, -2e-17);
  s.cost = 123.456789012345678;
  s.tau1 = 0.969855338997211;
  s.branch = "local";
  s.mesh_points = 77;
  s.lm_iters = 5;
  KktSummary k;
  k.rbar_f = 2.0;
  k.retrograde_curvature = -1.25;
  s.kkt = k;
  s.criteria.push_back({4, false, "[FAIL] 4 x"});
  s.files = {"a.json", "b.csv"};
  EXPECT_EQ(summary_from_json(to_json(s)), s);
}

TEST(Summary, MalformedJson) {
  EXPECT_THROW(summary_from_json("{not json"), ConfigError);
}

TEST(Branch, Strings) {
  for (auto b : {Branch::Global, Branch::Local, Branch::Unclassified, Branch::NotApplicable}) {
    EXPECT_EQ(parse_branch(to_string(b)), b);
  }
}

TEST(Classify, StationaryCosts) {
  const GravField f(kEarthMu);
  const double r0 = 7e6, rf = 2.1e7;
  const double V0 = circular_velocity(r0, f);
  const auto [pro, retro] = kkt::stationary_points(rf / r0);
  EXPECT_EQ(classify(pro.cost * V0, r0, rf, f), Branch::Global);
  EXPECT_EQ(classify(retro.cost * V0 * (1 + 1e-8), r0, rf, f), Branch::Local);
  EXPECT_EQ(classify(0.5 * (pro.cost + retro.cost) * V0, r0, rf, f), Branch::Unclassified);
}

TEST(Sweep, RatioTwoRowMatchesStationaryPoints) {
  const auto rows = sweep(2.0, 2.0, 1);
  ASSERT_EQ(rows.size(), 1u);
  const auto [pro, retro] = kkt::stationary_points(2.0);
  EXPECT_DOUBLE_EQ(rows[0].rbar_f, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].y0_prograde, pro.point.y0);
  EXPECT_DOUBLE_EQ(rows[0].y0_retrograde, retro.point.y0);
  EXPECT_DOUBLE_EQ(rows[0].cost_prograde, pro.cost);
  EXPECT_DOUBLE_EQ(rows[0].cost_retrograde, retro.cost);
}

TEST(Sweep, LogSpacedEndpoints) {
  const auto rows = sweep(1.5, 100.0, 7);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_DOUBLE_EQ(rows.front().rbar_f, 1.5);
  EXPECT_NEAR(rows.back().rbar_f, 100.0, 1e-12);
  EXPECT_NEAR(rows[3].rbar_f, std::sqrt(150.0), 1e-12);
}

TEST(Sweep, RejectsDegenerateRatio) {
  EXPECT_THROW(sweep(1.0, 2.0, 5), DomainError);
  EXPECT_THROW(sweep(3.0, 2.0, 5), DomainError);
  EXPECT_THROW(sweep(2.0, 3.0, 0), DomainError);
}

TEST(Sweep, CostGapMonotoneProperty) {
  // Retrograde pays s + 1 against s - 1 at departure and arrives with
  // tangential speed -s/rbar instead of +s/rbar, so the gap is
  // 2 * (1 + s/rbar) with s = sqrt(2 rbar/(1+rbar)).
  const auto rows = sweep(1.001, 100.0, 200);
  double prev = 0.0;
  for (const auto& r : rows) {
    const double b = r.rbar_f;
    const double want = 2 * (1 + std::sqrt(2 * b / (1 + b)) / b);
    const double gap = r.cost_retrograde - r.cost_prograde;
    EXPECT_LT(rel_err(gap, want), 1e-12);
    EXPECT_GT(gap, 0.0);
    if (&r != &rows.front()) EXPECT_NE(gap, prev);
    prev = gap;
  }
}

TEST(Sweep, CsvFormat) {
  const auto csv = sweep_csv(sweep(2.0, 4.0, 2));
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "rbar_f,y0_prograde,y0_retrograde,cost_prograde,cost_retrograde");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
  }
  EXPECT_EQ(rows, 2);
}

TEST(Run, AnalyticExampleTwo) {
  const auto dir = scratch_dir("analytic");
  const auto r = run(preset_scenario("example2-analytic"), dir.string());
  EXPECT_EQ(r.status, RunStatus::Ok);
  EXPECT_LT(rel_err(r.summary.dv0.norm(), 58.064987253967857), 1e-12);
  EXPECT_LT(rel_err(r.summary.t_ht, 2.715594949192177e+03), 1e-12);
  EXPECT_EQ(r.summary.branch, "global");
  const auto file = dir / "example2-analytic-summary.json";
  ASSERT_TRUE(fs::exists(file));
  EXPECT_EQ(summary_from_json(read_file(file)), r.summary);
}

TEST(Run, KktSummary) {
  const auto dir = scratch_dir("kkt");
  const auto r = run(preset_scenario("example1-kkt"), dir.string());
  ASSERT_TRUE(r.summary.kkt.has_value());
  EXPECT_LT(r.summary.kkt->prograde_residual, 1e-11);
  EXPECT_TRUE(r.summary.kkt->prograde_strict_min);
  EXPECT_LT(r.summary.kkt->prograde_cost, r.summary.kkt->retrograde_cost);
}

TEST(Run, BvpOneWritesTrajectory) {
  const auto dir = scratch_dir("bvp1");
  auto c = preset_scenario("example1-hohmann");
  c.name = "e1";
  const auto r = run(c, dir.string());
  ASSERT_EQ(r.status, RunStatus::Ok);
  EXPECT_EQ(r.summary.branch, "global");
  EXPECT_TRUE(r.summary.converged);
  const auto csv = read_file(dir / "e1-trajectory.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,rx,ry,rz,vx,vy,vz,p_rx,p_ry,p_rz,p_vx,p_vy,p_vz,primer");
  // one row per mesh node plus the header
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.summary.mesh_points + 1);
}

TEST(Run, RetrogradeLabelledLocal) {
  const auto dir = scratch_dir("retro");
  const auto r = run(preset_scenario("example1-retrograde"), dir.string());
  ASSERT_EQ(r.status, RunStatus::Ok);
  EXPECT_EQ(r.summary.branch, "local");
}

TEST(Run, NonconvergenceStillWritesSummary) {
  const auto dir = scratch_dir("noconv");
  auto c = preset_scenario("example1-hohmann");
  c.max_nodes = 120;
  c.name = "tight";
  const auto r = run(c, dir.string());
  EXPECT_EQ(r.status, RunStatus::Nonconvergence);
  EXPECT_EQ(r.summary.status, "nonconvergence");
  EXPECT_FALSE(r.summary.message.empty());
  EXPECT_TRUE(fs::exists(dir / "tight-summary.json"));
}

TEST(Run, VerifyModeFilter) {
  const auto dir = scratch_dir("verify");
  auto c = preset_scenario("verify");
  c.filter = "1-3";
  const auto r = run(c, dir.string());
  EXPECT_EQ(r.status, RunStatus::Ok);
  ASSERT_EQ(r.summary.criteria.size(), 3u);
  EXPECT_TRUE(r.summary.criteria[2].passed);
}

TEST(Verification, ParseFilter) {
  using verification::parse_filter;
  EXPECT_EQ(parse_filter("").size(), 10u);
  EXPECT_EQ(parse_filter("all").size(), 10u);
  EXPECT_EQ(parse_filter("1,3,7-9"), (std::vector<int>{1, 3, 7, 8, 9}));
  EXPECT_THROW(parse_filter("0"), ConfigError);
  EXPECT_THROW(parse_filter("11"), ConfigError);
  EXPECT_THROW(parse_filter("3-1"), ConfigError);
  EXPECT_THROW(parse_filter("a"), ConfigError);
}

TEST(Verification, SummaryLine) {
  verification::CriterionResult r;
  r.id = 3;
  r.title = "t";
  r.passed = true;
  EXPECT_EQ(r.summary_line(), "[PASS] 3 t (0.000 s)");
}
