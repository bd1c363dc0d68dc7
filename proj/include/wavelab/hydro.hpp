#pragma once

// Direct integration of the Madelung pair: quantum Hamilton-Jacobi for the
// phase S and continuity for the density rho, as two coupled real PDEs.
//
//   d rho/dt = -div(rho hbar grad S / M)
//   d S/dt   = -(hbar/2M)(grad S)^2 + (hbar/2M) lap sqrt(rho) / sqrt(rho) - V / hbar
//
// Nodeless states only: the quantum potential is singular at nodes and the
// solver refuses (NodelessViolation) instead of regularizing.

#include <cstddef>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/potential.hpp"

namespace wavelab {

// Minimum density, relative to the maximum, the solver accepts.
inline constexpr double kHydroHardFloor = 1e-9;
// Largest density renormalization a single step may need.
inline constexpr double kHydroMassTolerance = 1e-9;

// (rho, S) at one time. S is unwrapped and unbounded; `winding` is the number
// of 2 pi turns of S around the periodic domain, so S - winding * k1 * x is
// periodic.
class HydroState {
 public:
  HydroState(MadelungField field, double time, int winding, double mass_correction = 0.0);
  // Decomposes a normalized, nodeless wave field.
  static HydroState from_wavefield(const WaveField& psi, double time = 0.0);

  const MadelungField& field() const noexcept { return field_; }
  const Grid& grid() const noexcept { return field_.grid(); }
  double time() const noexcept { return time_; }
  int winding() const noexcept { return winding_; }
  // |mass - 1| removed by the renormalization after the step that produced this state.
  double mass_correction() const noexcept { return mass_correction_; }

 private:
  MadelungField field_;
  double time_;
  int winding_;
  double mass_correction_;
};

struct MadelungRates {
  std::vector<double> density_rate;
  std::vector<double> phase_rate;
};

// grad S including the winding contribution.
std::vector<double> phase_gradient(const HydroState& state);
// u = hbar grad S / M
std::vector<double> velocity(const HydroState& state);

MadelungRates madelung_rhs(const HydroState& state, const PotentialSpec& potential);

// Classical RK4 on the Madelung vector field, potential at t, t + dt/2, t + dt.
HydroState hydro_step(const HydroState& state, const PotentialSpec& potential, double dt);

struct HydroTrajectory {
  std::vector<HydroState> states;
  std::vector<double> times;
  double max_mass_correction = 0.0;
};

HydroTrajectory hydro_evolve(const HydroState& initial, const PotentialSpec& potential, double t1,
                             double dt, std::size_t snapshot_every);

// Hydro vs Schrodinger (split-step) from the same initial condition.
struct EquivalenceReport {
  std::vector<double> times;
  std::vector<double> density_l2;   // sqrt(int (rho_h - rho_s)^2)
  std::vector<double> velocity_l2;  // sqrt(int rho_s (u_h - u_s)^2)
  std::vector<double> phase_rms;    // sqrt(int rho_s wrap(S_h - S_s - c)^2), c the mean offset

  double max_density_l2() const;
  double max_velocity_l2() const;
  double max_phase_rms() const;
};

EquivalenceReport equivalence_report(const WaveField& psi0, const PotentialSpec& potential, double t1,
                                     double dt, std::size_t snapshot_every = 1);

}  // namespace wavelab
