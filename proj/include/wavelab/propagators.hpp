#pragma once

// Time evolution under i hbar dPsi/dt = H Psi by two independent schemes:
// Strang split-step Fourier and Crank-Nicolson with a finite-difference
// kinetic term. Time-dependent potentials are sampled at the step midpoint.

#include <cstddef>
#include <string_view>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/hamiltonian.hpp"
#include "wavelab/potential.hpp"

namespace wavelab {

enum class Scheme { split, crank_nicolson };

std::string_view to_string(Scheme s) noexcept;

// Half potential phase, full kinetic phase in Fourier space, half potential
// phase. Reusable across steps; caches the phase factors.
class SplitStepper {
 public:
  SplitStepper(const Grid& grid, PotentialSpec potential, double dt);
  // Advances psi in place from t to t + dt.
  void advance(std::vector<cplx>& psi, double t);

 private:
  void potential_phases(double t_mid);

  Grid grid_;
  PotentialSpec potential_;
  double dt_;
  std::vector<cplx> kinetic_phase_;
  std::vector<cplx> potential_phase_;
  bool potential_cached_ = false;
};

// (1 + i dt H/2hbar) psi' = (1 - i dt H/2hbar) psi with the three-point
// Laplacian; the periodic (cyclic) tridiagonal system is solved directly by
// Sherman-Morrison plus the Thomas algorithm.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const Grid& grid, PotentialSpec potential, double dt);
  void advance(std::vector<cplx>& psi, double t);

 private:
  void factorize(double t_mid);
  void thomas(std::vector<cplx>& rhs) const;

  Grid grid_;
  PotentialSpec potential_;
  double dt_;
  double beta_;      // dt / (2 hbar)
  double coupling_;  // hbar^2 / (2 M dx^2)
  cplx off_;         // off-diagonal entry of the implicit matrix
  std::vector<double> v_;
  std::vector<cplx> diag_;
  std::vector<cplx> c_prime_;
  std::vector<cplx> inv_pivot_;
  std::vector<cplx> z_;  // Sherman-Morrison correction vector
  cplx gamma_;
  cplx sm_denominator_;
  bool factor_cached_ = false;
};

// One step from t to t + dt. step_split accepts negative dt (backward evolution).
WaveField step_split(const WaveField& psi, const PotentialSpec& potential, double t, double dt);
WaveField step_cn(const WaveField& psi, const PotentialSpec& potential, double t, double dt);

struct EvolutionResult {
  std::vector<WaveField> snapshots;
  std::vector<double> times;  // strictly monotone in the direction of dt
  double norm_drift = 0.0;             // max_k | ||psi_k||^2 - ||psi_0||^2 |
  double max_step_norm_change = 0.0;   // max_k | ||psi_k+1||^2 - ||psi_k||^2 |
  Scheme scheme = Scheme::split;
  std::size_t steps = 0;
};

// Steps from t0 to t1 (t1 == t0 gives the single initial snapshot). dt must
// divide t1 - t0 within rounding and point from t0 towards t1. Snapshots at
// t0, every `snapshot_every` steps, and at t1. Throws DivergenceError naming
// the step when the field stops being finite.
EvolutionResult evolve(const WaveField& psi0, const PotentialSpec& potential, double t0, double t1,
                       double dt, Scheme scheme, std::size_t snapshot_every);

// Number of steps of size dt covering [t0, t1]; throws ConfigError when dt
// does not divide the interval.
std::size_t step_count(double t0, double t1, double dt);

}  // namespace wavelab
