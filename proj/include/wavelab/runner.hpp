#pragma once

// Executes scenarios: propagation, requested checks, output files, reports.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavelab/propagators.hpp"
#include "wavelab/scenario.hpp"

namespace wavelab {

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  std::vector<std::pair<std::string, double>> measured;
  bool pass = false;
  std::string note;
};

struct ScenarioReport {
  std::string name;
  std::string source;  // file the scenario came from, if any
  std::size_t points = 0;
  double length = 0.0;
  double hbar = 1.0;
  double mass = 1.0;
  Scheme scheme = Scheme::split;
  double t0 = 0.0, t1 = 0.0, dt = 0.0;
  std::size_t steps = 0;
  std::vector<CheckResult> checks;
  std::string error;  // set when the run stopped early
  bool pass = false;
  double wall_seconds = 0.0;  // printed, never written to report files

  // Text body of report.txt (no wall-clock, so reruns compare equal).
  std::string text() const;
};

struct RunOptions {
  std::optional<Scheme> scheme;            // overrides the scenario's scheme
  std::optional<std::filesystem::path> out_dir;  // outputs go to out_dir / name
  bool plot = false;                       // also write density.svg
};

ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& options = {});

struct SuiteReport {
  std::vector<ScenarioReport> scenarios;  // sorted by name
  bool pass = false;

  std::string text() const;
};

// Scenario files (*.scn) in `dir`, sorted.
std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir);

// Runs every scenario file in `dir` on up to `jobs` threads. Files that fail to
// parse and duplicate names become failing entries. Writes suite_report.txt
// into out_dir when given.
SuiteReport run_suite(const std::filesystem::path& dir, const RunOptions& options, bool strict = true,
                      std::size_t jobs = 1);

}  // namespace wavelab
