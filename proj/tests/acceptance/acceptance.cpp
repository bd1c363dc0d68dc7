// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wavelab/hydro.hpp"
#include "wavelab/observables.hpp"
#include "wavelab/runner.hpp"
#include "wavelab/states.hpp"
#include "wavelab/verify.hpp"

using namespace wavelab;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double spread3(double a, double b, double c) {
  return std::max({a, b, c}) - std::min({a, b, c});
}

Outcome expectation_routes() {
  std::mt19937_64 rng(7);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  double worst_p = 0.0, worst_k = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Grid g(512, uni(20.0, 40.0));
    const double L = g.length();
    const WaveField psi =
        sample(StateSpec::gaussian_packet(uni(0.4 * L, 0.6 * L), uni(1.0, 0.05 * L), uni(-3.0, 3.0)), g);
    worst_p = std::max(worst_p, spread3(mean_momentum(psi, MomentumMethod::fourier_sum).value,
                                        mean_momentum(psi, MomentumMethod::real_space).value,
                                        mean_momentum(psi, MomentumMethod::phase_form).value));
    worst_k = std::max(worst_k, spread3(mean_kinetic(psi, KineticMethod::fourier_sum).value,
                                        mean_kinetic(psi, KineticMethod::real_space).value,
                                        mean_kinetic(psi, KineticMethod::madelung_form).value));
  }
  return {worst_p < 1e-9 && worst_k < 1e-8, fmt("max <p> spread %.3e, max <E_kin> spread %.3e", worst_p, worst_k)};
}

Outcome local_energy_balance() {
  const Grid g(256, 20.0);
  const LocalFields f = local_fields(sample(StateSpec::ho_eigenstate(0), g), PotentialSpec::harmonic(1.0), 0.0);
  double e = 0.0, k = 0.0, q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!f.valid_mask[i]) continue;
    const double x = g.x(i) - 0.5 * g.length();
    const double oracle = 0.5 * (1.0 - x * x);
    e = std::max(e, std::abs(f.total_energy[i] - 0.5));
    k = std::max(k, std::abs(f.kinetic[i] - oracle));
    q = std::max(q, std::abs(f.quantum_potential[i] - oracle));
  }
  return {e < 1e-6 && k < 1e-6 && q < 1e-6, fmt("E(x) %.3e, kinetic %.3e, Q %.3e", e, k, q)};
}

Outcome fisher_identity() {
  std::mt19937_64 rng(11);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  double forms = 0.0, identity = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g(1024, 40.0, uni(0.5, 2.0), uni(0.5, 2.0));
    const WaveField psi = sample(StateSpec::gaussian_packet(20.0, uni(1.0, 3.0), uni(-2.0, 2.0)), g);
    const double fl = fisher_information(psi, FisherMethod::log_gradient).value;
    const double fq = fisher_information(psi, FisherMethod::laplacian_form).value;
    const double q = mean_quantum_potential(psi).value;
    forms = std::max(forms, std::abs(fl - fq) / std::abs(fq));
    identity = std::max(identity, std::abs(fq - 8.0 * g.mass() * q / (g.hbar() * g.hbar())) / fq);
  }
  const double ground = fisher_information(sample(StateSpec::ho_eigenstate(0), Grid(512, 20.0)),
                                           FisherMethod::log_gradient).value;
  return {forms < 1e-7 && identity < 1e-8 && std::abs(ground - 2.0) < 1e-6,
          fmt("forms %.3e rel, identity %.3e rel, ground FI %.12f", forms, identity, ground)};
}

Outcome derivation_residuals() {
  double cont = 0.0, qhj = 0.0;
  // Wide enough that the breathing packet never reaches the kink of the periodic well.
  const Grid g(512, 30.0);
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  for (const StateSpec& s : {StateSpec::ho_coherent(1.0, 2.0), StateSpec::ho_eigenstate(0),
                             StateSpec::gaussian_packet(15.0, 1.2, 1.5)}) {
    const EvolutionResult r = evolve(sample(s, g), V, 0.0, 2.0 * pi, 2.0 * pi / 2000, Scheme::split, 100);
    const ResidualSeries rs = residuals(r, V);
    cont = std::max(cont, rs.max_continuity());
    qhj = std::max(qhj, rs.max_qhj());
  }
  return {cont < 1e-9 && qhj < 1e-9, fmt("max continuity %.3e, max QHJ %.3e", cont, qhj)};
}

Outcome madelung_equivalence() {
  const double omega = 0.125, ell = 1.0 / std::sqrt(omega);
  const Grid g(512, 5.0 * ell);
  StateSpec spec = StateSpec::ho_coherent(omega, 0.5 * ell);
  spec.periodize = true;
  const WaveField psi0 = sample(spec, g);
  const PotentialSpec V = PotentialSpec::harmonic(omega);
  const double half_period = 25.1328;
  double d[3];
  for (int level = 0; level < 3; ++level) {
    const double dt = 1e-4 / (1 << level);
    d[level] = equivalence_report(psi0, V, half_period, dt, 1000u << level).max_density_l2();
  }
  const double shrink = d[0] / d[2];
  return {d[0] < 1e-5 && shrink >= 8.0,
          fmt("L2 density %.3e / %.3e / %.3e at dt, dt/2, dt/4; shrink %.2fx", d[0], d[1], d[2], shrink)};
}

Outcome dispersion() {
  const Grid g(64, 2.0 * pi);
  double worst = 0.0;
  for (double k0 : {1.0, 2.0, 3.0}) {
    for (double v0 : {0.0, 0.25, -0.5}) worst = std::max(worst, dispersion_check(g, k0, v0, 1.0, 0.001).error());
  }
  return {worst < 1e-10, fmt("max |omega error| %.3e over 9 (k0, V0)", worst)};
}

Outcome potential_recovery() {
  double err = 0.0, imag = 0.0;
  const auto take = [&](const RecoveredPotential& r) {
    err = std::max(err, r.max_error);
    imag = std::max(imag, r.max_imag);
  };
  take(recover_potential(sample(StateSpec::plane_wave(1.0), Grid(64, 2.0 * pi)), PotentialSpec::constant(0.3), 0.0));
  const Grid g(512, 20.0);
  take(recover_potential(sample(StateSpec::ho_coherent(1.0, 1.5), g), PotentialSpec::harmonic(1.0), 0.0));
  const Grid b(1024, 40.0);
  take(recover_potential(sample(StateSpec::gaussian_packet(20.0, 1.5, 1.0), b),
                         PotentialSpec::barrier(1.0, 19.0, 21.0), 0.0));
  return {err < 1e-8 && imag < 1e-8, fmt("max error %.3e, max imaginary part %.3e", err, imag)};
}

Outcome unitarity_energy() {
  const Grid g(256, 20.0);
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  const EvolutionResult r = evolve(sample(StateSpec::ho_coherent(1.0, 2.0), g), V, 0.0, 1.0, 1e-4, Scheme::split, 10000);
  const double e0 = mean_total_energy(r.snapshots.front(), V, 0.0, EnergyMethod::hamiltonian).value;
  const double e1 = mean_total_energy(r.snapshots.back(), V, 1.0, EnergyMethod::hamiltonian).value;
  const double drift = std::abs(e1 - e0) / std::abs(e0);
  return {r.steps == 10000 && r.max_step_norm_change < 1e-13 && drift < 1e-8,
          fmt("%zu steps, max per-step norm change %.3e, relative energy drift %.3e", r.steps,
              r.max_step_norm_change, drift)};
}

Outcome classical_limit() {
  const ClassicalRun r = classical_limit_sweep(PotentialSpec::quartic(0.25), Grid(2048, 8.0), 4.0, 2.0, 0.1,
                                               {0.04, 0.02, 0.01, 0.005}, 1.0, 1e-4);
  const bool resolved = std::all_of(r.resolved.begin(), r.resolved.end(), [](bool b) { return b; });
  bool decreasing = true;
  for (std::size_t i = 1; i < r.packet_center_error.size(); ++i) {
    decreasing = decreasing && r.packet_center_error[i] < r.packet_center_error[i - 1];
  }
  return {resolved && decreasing && !r.degenerate && std::abs(r.share_slope - 2.0) <= 0.2,
          fmt("center error %.3e -> %.3e over hbar factor 8, share slope %.4f", r.packet_center_error.front(),
              r.packet_center_error.back(), r.share_slope)};
}

Outcome tunneling() {
  const TunnelingReport t = tunneling_probe(Grid(1024, 40.0), PotentialSpec::barrier(1.25, 19.5, 20.5),
                                            StateSpec::gaussian_packet(10.0, 1.0, 1.0), 15.0, 1e-3);
  return {t.applicable && t.transmitted > 0.0 && t.min_kinetic_in_barrier < 0.0,
          fmt("<E> %.4f below height %.2f, transmitted %.3e, min kinetic in barrier %.4f", t.mean_energy,
              t.barrier_height, t.transmitted, t.min_kinetic_in_barrier)};
}

Outcome convergence() {
  const SchemeComparison c =
      compare_schemes(StateSpec::ho_coherent(1.0, 2.0), Grid(256, 20.0), PotentialSpec::harmonic(1.0), 1.0, 0.01);
  const double ps = c.split.observed_order, pc = c.crank_nicolson.observed_order;
  return {std::abs(ps - 2.0) <= 0.2 && std::abs(pc - 2.0) <= 0.2 && c.within_bound(),
          fmt("order split %.4f, CN %.4f; distance %.3e within bound %.3e", ps, pc, c.distance, c.bound())};
}

std::vector<std::pair<fs::path, std::string>> tree(const fs::path& root) {
  std::vector<std::pair<fs::path, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    out.emplace_back(fs::relative(e.path(), root), s.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "wavelab_acceptance_determinism";
  fs::remove_all(base);
  RunOptions opt;
  opt.out_dir = base / "first";
  run_suite(WAVELAB_SCENARIO_DIR, opt);
  opt.out_dir = base / "second";
  run_suite(WAVELAB_SCENARIO_DIR, opt);
  const auto a = tree(base / "first"), b = tree(base / "second");
  std::size_t differing = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) differing += a[i] != b[i];
  const bool same = a.size() == b.size() && differing == 0 && !a.empty();
  fs::remove_all(base);
  return {same, fmt("%zu files vs %zu files, %zu differ", a.size(), b.size(), differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"expectation routes agree", expectation_routes},
      {"local energy balance", local_energy_balance},
      {"Fisher identity", fisher_identity},
      {"continuity and QHJ residuals", derivation_residuals},
      {"Madelung equivalence", madelung_equivalence},
      {"dispersion relation", dispersion},
      {"potential recovery", potential_recovery},
      {"unitarity and energy conservation", unitarity_energy},
      {"classical limit", classical_limit},
      {"tunneling", tunneling},
      {"temporal convergence", convergence},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
