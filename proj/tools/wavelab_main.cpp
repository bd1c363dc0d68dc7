#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "wavelab/error.hpp"
#include "wavelab/kernels.hpp"
#include "wavelab/runner.hpp"
#include "wavelab/scenario.hpp"

#ifndef WAVELAB_SCENARIO_DIR
#define WAVELAB_SCENARIO_DIR "scenarios"
#endif

namespace {

void print_report(const wavelab::ScenarioReport& r) {
  std::printf("%-32s %s  (%.2f s)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.wall_seconds);
  for (const auto& c : r.checks) {
    if (!c.pass) {
      std::printf("    %s FAIL%s%s\n", c.name.c_str(), c.note.empty() ? "" : ": ", c.note.c_str());
    }
  }
  if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelab: Schrodinger and Madelung dynamics on a periodic 1-D grid"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  std::string scheme_name;
  bool strict = true;
  bool plot = false;
  app.add_option("--out", out_dir, "Directory for reports and series");
  app.add_option("--scheme", scheme_name, "Override the propagator")->check(CLI::IsMember({"split", "cn"}));
  app.add_flag("--strict,!--no-strict", strict, "Reject unknown keys (default on)");
  app.add_flag("--plot", plot, "Also write density.svg per scenario");

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string suite_dir;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* suite = app.add_subcommand("suite", "Run every *.scn file in a directory");
  suite->add_option("directory", suite_dir, "Scenario directory")->required()->check(CLI::ExistingDirectory);
  suite->add_option("--jobs,-j", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);

  std::string list_dir = WAVELAB_SCENARIO_DIR;
  auto* list = app.add_subcommand("list-scenarios", "List scenario files and their names");
  list->add_option("directory", list_dir, "Scenario directory (default: bundled scenarios)");

  CLI11_PARSE(app, argc, argv);

  wavelab::RunOptions options;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (scheme_name == "split") options.scheme = wavelab::Scheme::split;
  if (scheme_name == "cn") options.scheme = wavelab::Scheme::crank_nicolson;
  options.plot = plot;

  try {
    if (*run) {
      const wavelab::Scenario sc = wavelab::load_scenario(scenario_path, strict);
      for (const auto& w : sc.warnings) std::fprintf(stderr, "warning: ignored %s\n", w.c_str());
      const wavelab::ScenarioReport r = wavelab::run_scenario(sc, options);
      std::cout << r.text();
      std::printf("wall-clock %.3f s, kernels %.*s\n", r.wall_seconds, static_cast<int>(wavelab::kernels::active().name.size()), wavelab::kernels::active().name.data());
      return r.pass ? 0 : 1;
    }
    if (*suite) {
      const wavelab::SuiteReport s = wavelab::run_suite(suite_dir, options, strict, jobs);
      for (const auto& r : s.scenarios) print_report(r);
      std::printf("%s: %zu scenarios\n", s.pass ? "PASS" : "FAIL", s.scenarios.size());
      return s.pass ? 0 : 1;
    }
    if (*list) {
      for (const auto& f : wavelab::scenario_files(list_dir)) {
        try {
          const wavelab::Scenario sc = wavelab::load_scenario(f.string(), strict);
          std::printf("%-32s %s\n", sc.name.c_str(), sc.description.c_str());
        } catch (const wavelab::Error& e) {
          std::printf("%-32s (invalid: %s)\n", f.filename().string().c_str(), e.what());
        }
      }
      return 0;
    }
  } catch (const wavelab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
