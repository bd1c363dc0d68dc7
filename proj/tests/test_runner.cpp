#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "wavelab/runner.hpp"
#include "wavelab/scenario.hpp"

using namespace wavelab;
namespace fs = std::filesystem;

namespace {

Scenario bundled(const std::string& name) {
  return load_scenario((fs::path(WAVELAB_SCENARIO_DIR) / (name + ".scn")).string());
}

double measured(const CheckResult& c, const std::string& key) {
  for (const auto& [k, v] : c.measured) {
    if (k == key) return v;
  }
  FAIL("no measurement named " << key);
  return 0.0;
}

const CheckResult& check_named(const ScenarioReport& r, const std::string& name) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const CheckResult& c) { return c.name == name; });
  REQUIRE(it != r.checks.end());
  return *it;
}

std::string small(const std::string& name, const std::string& checks) {
  return "wavelab-scenario 1\n[scenario]\nname = " + name +
         "\n[grid]\npoints = 64\nlength = 2*pi\n[state]\nkind = plane_wave\nk0 = 1\n"
         "[potential]\nkind = zero\n[schedule]\nt1 = 0.1\ndt = 0.01\n[checks]\n" +
         checks + "\n";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wavelab_runner_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("ground state scenario passes") {
  const ScenarioReport r = run_scenario(bundled("ho_ground_stationarity"));
  CHECK(r.error.empty());
  for (const CheckResult& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(r.pass);
}

TEST_CASE("dispersion scenario measures omega") {
  const ScenarioReport r = run_scenario(bundled("dispersion_k1_v0"));
  CHECK(r.pass);
  CHECK(measured(check_named(r, "dispersion"), "omega_measured") == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("tunneling scenario sees negative kinetic energy in the barrier") {
  const ScenarioReport r = run_scenario(bundled("tunneling_basic"));
  const CheckResult& c = check_named(r, "tunneling");
  CHECK(c.pass);
  CHECK(measured(c, "min_kinetic_in_barrier") < 0.0);
  CHECK(measured(c, "transmitted") > 1e-6);
}

TEST_CASE("overall verdict is the conjunction of the checks") {
  const ScenarioReport good = run_scenario(parse_scenario(small("good", "norm_drift = 1e-12\nstationarity = 1e-12")));
  CHECK(good.pass);
  const ScenarioReport bad = run_scenario(parse_scenario(small("bad", "norm_drift = 1e-12\nqhj_residual = 1e-300")));
  REQUIRE(bad.checks.size() == 2);
  CHECK(bad.checks[0].pass);
  CHECK_FALSE(bad.checks[1].pass);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("report text and files") {
  const fs::path out = scratch("files");
  RunOptions opt;
  opt.out_dir = out;
  Scenario s = parse_scenario(small("files", "norm_drift = 1e-12") + "[outputs]\ndensity = true\n");
  const ScenarioReport r = run_scenario(s, opt);
  CHECK(fs::exists(out / "files" / "report.txt"));
  CHECK(fs::exists(out / "files" / "density.dat"));
  const std::string text = r.text();
  CHECK(text.find("scenario files") == 0);
  CHECK(text.find("overall PASS") != std::string::npos);
  CHECK(text.find("wall") == std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("suite is sorted and rejects duplicate names") {
  const fs::path dir = scratch("suite");
  std::ofstream(dir / "b.scn") << small("zeta", "norm_drift = 1e-12");
  std::ofstream(dir / "a.scn") << small("alpha", "norm_drift = 1e-12");
  const SuiteReport ok = run_suite(dir, {});
  REQUIRE(ok.scenarios.size() == 2);
  CHECK(ok.scenarios[0].name == "alpha");
  CHECK(ok.scenarios[1].name == "zeta");
  CHECK(ok.pass);

  std::ofstream(dir / "c.scn") << small("alpha", "norm_drift = 1e-12");
  const SuiteReport dup = run_suite(dir, {});
  CHECK_FALSE(dup.pass);
  const auto failing = std::count_if(dup.scenarios.begin(), dup.scenarios.end(),
                                     [](const ScenarioReport& r) { return !r.pass; });
  CHECK(failing >= 1);

  std::ofstream(dir / "d.scn") << "garbage\n";
  const SuiteReport broken = run_suite(dir, {});
  CHECK_FALSE(broken.pass);
  fs::remove_all(dir);
}

}
