#pragma once

// Declarative scenario files.
//
//   wavelab-scenario 1
//   [scenario]  name, description
//   [grid]      points, length, hbar, mass
//   [state]     kind, k0, x0, sigma0, n, omega, displacement, periodize
//   [potential] kind, value, omega, coefficient, center, height, depth,
//               x_a, x_b, nodes, values, ramp_rate
//   [schedule]  t0, t1, dt, snapshot_every, scheme
//   [checks]    <check> = <tolerance>
//   [outputs]   density, phase, local_fields, observables, residuals (true/false)
//   [classical] hbar, x0, p0, sigma0, t1, dt
//
// One `key = value` per line; '#' starts a comment. Reals accept a trailing
// "*pi" (or plain "pi"); lists are comma separated.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/potential.hpp"
#include "wavelab/propagators.hpp"
#include "wavelab/states.hpp"

namespace wavelab {

inline constexpr std::string_view kScenarioHeader = "wavelab-scenario 1";

enum class CheckKind {
  norm_drift,            // max | ||psi||^2 - 1 | over the run
  energy_drift,          // relative <E> drift between first and last snapshot
  stationarity,          // max L2 distance of rho(t) from rho(0)
  expectation_agreement, // spread of the <p> and <E_kin> routes over all snapshots
  fisher_identity,       // relative mismatch of the FI forms and 8M<Q>/hbar^2
  local_energy,          // max |E(x) - <E>| on the density mask, initial state
  continuity_residual,
  qhj_residual,
  recover_potential,     // max recovery error and max imaginary part
  dispersion,            // |omega_measured - omega_predicted|
  hydro_equivalence,     // max L2 density difference, hydro vs Schrodinger
  scheme_agreement,      // L2 distance split vs Crank-Nicolson at t1
  temporal_order,        // |observed order - 2| for the selected scheme
  classical_limit,       // |log-log share slope - 2|, plus monotone center error
  tunneling,             // transmitted > tolerance and negative kinetic in the barrier
};

std::string_view to_string(CheckKind kind) noexcept;
std::optional<CheckKind> check_kind_from_string(std::string_view name) noexcept;

struct CheckSpec {
  CheckKind kind;
  double tolerance;
};

struct OutputSelection {
  bool density = false;
  bool phase = false;
  bool local_fields = false;
  bool observables = false;
  bool residuals = false;
};

struct ClassicalSpec {
  std::vector<double> hbar_values;
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma0 = 0.1;
  double t1 = 1.0;
  double dt = 1e-4;
};

struct Scenario {
  std::string name;
  std::string description;
  std::size_t points = 0;
  double length = 0.0;
  double hbar = 1.0;
  double mass = 1.0;
  StateSpec state;
  PotentialSpec potential;
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.0;
  std::size_t snapshot_every = 1;
  Scheme scheme = Scheme::split;
  std::vector<CheckSpec> checks;
  OutputSelection outputs;
  std::optional<ClassicalSpec> classical;
  // Keys ignored in non-strict mode, as "line N: key".
  std::vector<std::string> warnings;

  Grid grid() const { return Grid(points, length, hbar, mass); }
};

// Throws ParseError (message starts with "line N: ") on syntax errors,
// unknown sections or keys (strict mode), malformed values, missing
// required keys and violated invariants.
Scenario parse_scenario(std::string_view text, bool strict = true);
Scenario load_scenario(const std::string& path, bool strict = true);

}  // namespace wavelab
