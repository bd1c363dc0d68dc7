#include "wavelab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "wavelab/error.hpp"
#include "wavelab/hydro.hpp"
#include "wavelab/observables.hpp"
#include "wavelab/series.hpp"
#include "wavelab/verify.hpp"

namespace wavelab {
namespace {

double density_l2(const WaveField& a, const WaveField& b) {
  const std::vector<double> ra = a.density(), rb = b.density();
  double s = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) s += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  return std::sqrt(s * a.grid().dx());
}

double spread(std::initializer_list<double> v) {
  return std::max(v) - std::min(v);
}

CheckResult evaluate(const CheckSpec& spec, const Scenario& sc, const Grid& g, const WaveField& psi0,
                     const EvolutionResult& run, Scheme scheme) {
  CheckResult c;
  c.name = std::string(to_string(spec.kind));
  c.tolerance = spec.tolerance;
  const double tol = spec.tolerance;
  const PotentialSpec& V = sc.potential;

  switch (spec.kind) {
    case CheckKind::norm_drift: {
      c.measured = {{"norm_drift", run.norm_drift}, {"max_step_norm_change", run.max_step_norm_change}};
      c.pass = run.norm_drift < tol;
      break;
    }
    case CheckKind::energy_drift: {
      const double e0 = mean_total_energy(run.snapshots.front(), V, run.times.front(), EnergyMethod::hamiltonian).value;
      const double e1 = mean_total_energy(run.snapshots.back(), V, run.times.back(), EnergyMethod::hamiltonian).value;
      const double drift = std::abs(e1 - e0) / std::max(std::abs(e0), 1e-300);
      c.measured = {{"energy_initial", e0}, {"energy_final", e1}, {"relative_drift", drift}};
      c.pass = drift < tol;
      break;
    }
    case CheckKind::stationarity: {
      double worst = 0.0;
      for (const WaveField& s : run.snapshots) worst = std::max(worst, density_l2(s, run.snapshots.front()));
      c.measured = {{"max_density_l2", worst}};
      c.pass = worst < tol;
      break;
    }
    case CheckKind::expectation_agreement: {
      double dp = 0.0, dk = 0.0;
      for (const WaveField& s : run.snapshots) {
        dp = std::max(dp, spread({mean_momentum(s, MomentumMethod::fourier_sum).value,
                                  mean_momentum(s, MomentumMethod::real_space).value,
                                  mean_momentum(s, MomentumMethod::phase_form).value}));
        dk = std::max(dk, spread({mean_kinetic(s, KineticMethod::fourier_sum).value,
                                  mean_kinetic(s, KineticMethod::real_space).value,
                                  mean_kinetic(s, KineticMethod::madelung_form).value}));
      }
      c.measured = {{"momentum_spread", dp}, {"kinetic_spread", dk}};
      c.pass = dp < tol && dk < tol;
      break;
    }
    case CheckKind::fisher_identity: {
      double forms = 0.0, identity = 0.0;
      for (const WaveField& s : run.snapshots) {
        const double fl = fisher_information(s, FisherMethod::log_gradient).value;
        const double fq = fisher_information(s, FisherMethod::laplacian_form).value;
        const double q = mean_quantum_potential(s).value;
        const double scaled = 8.0 * g.mass() * q / (g.hbar() * g.hbar());
        forms = std::max(forms, std::abs(fl - fq) / std::abs(fq));
        identity = std::max(identity, std::abs(fq - scaled) / std::abs(fq));
      }
      c.measured = {{"forms_relative", forms}, {"identity_relative", identity}};
      c.pass = forms < tol && identity < tol;
      break;
    }
    case CheckKind::local_energy: {
      const LocalFields f = local_fields(psi0, V, sc.t0);
      const double mean = mean_total_energy(psi0, V, sc.t0, EnergyMethod::hamiltonian).value;
      double worst = 0.0;
      for (std::size_t i = 0; i < f.total_energy.size(); ++i) {
        if (f.valid_mask[i]) worst = std::max(worst, std::abs(f.total_energy[i] - mean));
      }
      c.measured = {{"mean_energy", mean}, {"max_deviation", worst}};
      c.pass = worst < tol;
      break;
    }
    case CheckKind::continuity_residual:
    case CheckKind::qhj_residual: {
      const ResidualSeries r = residuals(run, V);
      const bool cont = spec.kind == CheckKind::continuity_residual;
      const double value = cont ? r.max_continuity() : r.max_qhj();
      c.measured = {{cont ? "max_continuity" : "max_qhj", value},
                    {"max_excluded_mass", *std::max_element(r.mask_fraction.begin(), r.mask_fraction.end())}};
      c.pass = value < tol;
      break;
    }
    case CheckKind::recover_potential: {
      double err = 0.0, imag = 0.0;
      for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
        const RecoveredPotential r = recover_potential(run.snapshots[s], V, run.times[s]);
        err = std::max(err, r.max_error);
        imag = std::max(imag, r.max_imag);
      }
      c.measured = {{"max_error", err}, {"max_imag", imag}};
      c.pass = err < tol && imag < tol;
      break;
    }
    case CheckKind::dispersion: {
      const double v0 = V.kind() == PotentialKind::constant ? V.strength() : 0.0;
      const DispersionResult d = dispersion_check(g, sc.state.k0, v0, sc.t1 - sc.t0, sc.dt);
      c.measured = {{"omega_measured", d.omega_measured}, {"omega_predicted", d.omega_predicted}, {"error", d.error()}};
      c.pass = d.error() < tol;
      break;
    }
    case CheckKind::hydro_equivalence: {
      const EquivalenceReport e = equivalence_report(psi0, V, sc.t1 - sc.t0, sc.dt, sc.snapshot_every);
      c.measured = {{"max_density_l2", e.max_density_l2()},
                    {"max_velocity_l2", e.max_velocity_l2()},
                    {"max_phase_rms", e.max_phase_rms()}};
      c.pass = e.max_density_l2() < tol;
      break;
    }
    case CheckKind::scheme_agreement: {
      const Scheme other = scheme == Scheme::split ? Scheme::crank_nicolson : Scheme::split;
      const EvolutionResult alt = evolve(psi0, V, sc.t0, sc.t1, sc.dt, other, run.steps == 0 ? 1 : run.steps);
      const double d = l2_distance(run.snapshots.back(), alt.snapshots.back());
      c.measured = {{"final_l2_distance", d}};
      c.pass = d < tol;
      break;
    }
    case CheckKind::temporal_order: {
      if (sc.t0 != 0.0) throw ConfigError("temporal_order needs t0 = 0");
      const ConvergenceStudy st = temporal_convergence(psi0, V, sc.t1, sc.dt, scheme);
      c.measured = {{"observed_order", st.observed_order}};
      for (std::size_t i = 0; i < st.differences.size(); ++i) {
        c.measured.emplace_back("difference_" + std::to_string(i), st.differences[i]);
      }
      c.pass = std::abs(st.observed_order - 2.0) < tol;
      break;
    }
    case CheckKind::classical_limit: {
      const ClassicalSpec& cl = *sc.classical;
      const ClassicalRun r = classical_limit_sweep(V, g, cl.x0, cl.p0, cl.sigma0, cl.hbar_values, cl.t1, cl.dt);
      bool all_resolved = true;
      for (std::size_t i = 0; i < r.hbar_values.size(); ++i) {
        const std::string tag = "hbar=" + format_number(r.hbar_values[i]);
        c.measured.emplace_back("center_error " + tag, r.packet_center_error[i]);
        c.measured.emplace_back("q_share " + tag, r.quantum_potential_share[i]);
        all_resolved = all_resolved && r.resolved[i];
      }
      c.measured.emplace_back("share_slope", r.share_slope);
      c.measured.emplace_back("monotone", r.monotone ? 1.0 : 0.0);
      c.measured.emplace_back("degenerate", r.degenerate ? 1.0 : 0.0);
      if (!all_resolved) c.note = "unresolved sweep entries";
      if (r.degenerate) c.note = "center error negligible at every hbar (quadratic potential)";
      c.pass = all_resolved && r.monotone && std::abs(r.share_slope - 2.0) < tol;
      break;
    }
    case CheckKind::tunneling: {
      const TunnelingReport t = tunneling_probe(g, V, sc.state, sc.t1 - sc.t0, sc.dt, sc.snapshot_every);
      c.measured = {{"mean_energy", t.mean_energy},
                    {"barrier_height", t.barrier_height},
                    {"transmitted", t.transmitted},
                    {"min_kinetic_in_barrier", t.min_kinetic_in_barrier}};
      if (!t.applicable) c.note = "not applicable: barrier height is zero";
      c.pass = t.applicable && t.transmitted > tol && t.min_kinetic_in_barrier < 0.0;
      break;
    }
  }
  return c;
}

std::string describe_failure(const std::string& name, const std::exception& e) {
  std::string msg = name + ": " + e.what();
  if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) {
    msg += " (t = " + format_number(d->time()) + ")";
  } else if (const auto* n = dynamic_cast<const NodelessViolation*>(&e)) {
    msg += " (t = " + format_number(n->time()) + ")";
  }
  return msg;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + file.string() + "'");
}

}  // namespace

std::string ScenarioReport::text() const {
  std::ostringstream o;
  o << "scenario " << name << '\n';
  if (!source.empty()) o << "source " << source << '\n';
  o << "grid points=" << points << " length=" << format_number(length) << " hbar=" << format_number(hbar)
    << " mass=" << format_number(mass) << '\n';
  o << "schedule scheme=" << to_string(scheme) << " t0=" << format_number(t0) << " t1=" << format_number(t1)
    << " dt=" << format_number(dt) << " steps=" << steps << '\n';
  for (const CheckResult& c : checks) {
    o << "check " << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << " tolerance=" << format_number(c.tolerance)
      << '\n';
    for (const auto& [k, v] : c.measured) o << "  " << k << " = " << format_number(v) << '\n';
    if (!c.note.empty()) o << "  note: " << c.note << '\n';
  }
  if (!error.empty()) o << "error " << error << '\n';
  o << "overall " << (pass ? "PASS" : "FAIL") << '\n';
  return o.str();
}

ScenarioReport run_scenario(const Scenario& sc, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioReport rep;
  rep.name = sc.name;
  rep.points = sc.points;
  rep.length = sc.length;
  rep.hbar = sc.hbar;
  rep.mass = sc.mass;
  rep.scheme = options.scheme.value_or(sc.scheme);
  rep.t0 = sc.t0;
  rep.t1 = sc.t1;
  rep.dt = sc.dt;

  try {
    const Grid g = sc.grid();
    const WaveField psi0 = sample(sc.state, g);
    const EvolutionResult run = evolve(psi0, sc.potential, sc.t0, sc.t1, sc.dt, rep.scheme, sc.snapshot_every);
    rep.steps = run.steps;
    for (const CheckSpec& spec : sc.checks) {
      try {
        rep.checks.push_back(evaluate(spec, sc, g, psi0, run, rep.scheme));
      } catch (const Error& e) {
        CheckResult c;
        c.name = std::string(to_string(spec.kind));
        c.tolerance = spec.tolerance;
        c.note = describe_failure(sc.name, e);
        rep.checks.push_back(c);
      }
    }
    if (options.out_dir) {
      const std::filesystem::path dir = *options.out_dir / sc.name;
      const SeriesSelection sel = SeriesSelection::all(run, sc.outputs);
      emit_series(run, sc.potential, sel, dir);
      if (options.plot) write_density_svg(run, sel, dir / "density.svg");
    }
  } catch (const Error& e) {
    rep.error = describe_failure(sc.name, e);
  }

  rep.pass = rep.error.empty() &&
             std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.pass; });
  if (options.out_dir) {
    const std::filesystem::path dir = *options.out_dir / sc.name;
    std::filesystem::create_directories(dir);
    write_text(dir / "report.txt", rep.text());
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string SuiteReport::text() const {
  std::ostringstream o;
  for (const ScenarioReport& r : scenarios) o << (r.pass ? "PASS " : "FAIL ") << r.name << '\n';
  o << "suite " << (pass ? "PASS" : "FAIL") << ' ' << scenarios.size() << " scenarios\n";
  return o.str();
}

std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: '" + dir.string() + "'");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".scn") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

SuiteReport run_suite(const std::filesystem::path& dir, const RunOptions& options, bool strict, std::size_t jobs) {
  const std::vector<std::filesystem::path> files = scenario_files(dir);

  struct Item {
    std::filesystem::path file;
    std::optional<Scenario> scenario;
    ScenarioReport report;
  };
  std::vector<Item> items(files.size());
  std::map<std::string, std::size_t> name_count;
  for (std::size_t i = 0; i < files.size(); ++i) {
    items[i].file = files[i];
    items[i].report.source = files[i].filename().string();
    try {
      items[i].scenario = load_scenario(files[i].string(), strict);
      items[i].report.name = items[i].scenario->name;
      ++name_count[items[i].scenario->name];
    } catch (const Error& e) {
      items[i].report.name = files[i].stem().string();
      items[i].report.error = files[i].filename().string() + ": " + e.what();
    }
  }
  for (Item& it : items) {
    if (it.scenario && name_count[it.scenario->name] > 1) {
      it.report.error = "duplicate scenario name '" + it.scenario->name + "' in batch";
      it.scenario.reset();
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      if (!items[i].scenario) continue;
      const std::string source = items[i].report.source;
      items[i].report = run_scenario(*items[i].scenario, options);
      items[i].report.source = source;
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, items.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SuiteReport suite;
  for (Item& it : items) suite.scenarios.push_back(std::move(it.report));
  std::sort(suite.scenarios.begin(), suite.scenarios.end(),
            [](const ScenarioReport& a, const ScenarioReport& b) { return a.name < b.name; });
  suite.pass = !suite.scenarios.empty() &&
               std::all_of(suite.scenarios.begin(), suite.scenarios.end(), [](const ScenarioReport& r) { return r.pass; });
  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    std::string body = suite.text();
    for (const ScenarioReport& r : suite.scenarios) body += "\n" + r.text();
    write_text(*options.out_dir / "suite_report.txt", body);
  }
  return suite;
}

}  // namespace wavelab
