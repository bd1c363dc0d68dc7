#pragma once

// Executable checks of the hydrodynamic derivation: continuity and quantum
// Hamilton-Jacobi residuals along Schrodinger trajectories, potential
// recovery, plane-wave dispersion, the classical limit and tunneling.

#include <cstddef>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/potential.hpp"
#include "wavelab/propagators.hpp"
#include "wavelab/states.hpp"

namespace wavelab {

struct ResidualSeries {
  std::vector<double> times;
  // sqrt(int (d rho/dt + div j)^2 dx)
  std::vector<double> continuity_residual;
  // sqrt(int_valid rho r^2 dx) with r = hbar dS/dt + hbar^2/2M ((grad S)^2 - lap|Psi|/|Psi|) + V
  std::vector<double> qhj_residual;
  // probability mass outside the density mask
  std::vector<double> mask_fraction;

  double max_continuity() const;
  double max_qhj() const;
};

// Time derivatives come from the Schrodinger right-hand side, so only the
// spatial discretization enters.
ResidualSeries residuals(const EvolutionResult& trajectory, const PotentialSpec& potential,
                         double relative_floor = kDefaultDensityFloor);

struct RecoveredPotential {
  std::vector<double> values;  // real part of the quotient, 0 off the mask
  Mask valid;
  double max_imag = 0.0;       // max |Im| over the mask
  double max_error = 0.0;      // max |V_rec - V_true| over the mask
  double max_error_offset = 0.0;  // same after removing the mean offset
};

// V = (i hbar dPsi/dt + hbar^2/2M lap Psi) / Psi with dPsi/dt taken from the
// evolution under `potential`.
RecoveredPotential recover_potential(const WaveField& psi, const PotentialSpec& potential, double t,
                                     double relative_floor = kDefaultDensityFloor);

struct DispersionResult {
  double omega_measured = 0.0;
  double omega_predicted = 0.0;
  double error() const;
};

// Evolves the plane wave exp(i k0 x) under the constant V0 with the split
// scheme and fits the rate of arg <Psi(0)|Psi(t)>.
DispersionResult dispersion_check(const Grid& grid, double k0, double v0, double t_end, double dt);

struct ClassicalRun {
  std::vector<double> hbar_values;
  std::vector<double> packet_center_error;
  std::vector<double> quantum_potential_share;
  std::vector<bool> resolved;
  bool monotone = true;     // center error non-increasing within 10% as hbar decreases
  bool degenerate = false;  // center error negligible at every hbar (quadratic potentials)
  double share_slope = 0.0; // log-log slope of the share against hbar; NaN with < 2 resolved points
};

struct ClassicalTrajectory {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> p;
};

// Fourth-order Runge-Kutta on dx/dt = p/M, dp/dt = -dV/dx.
ClassicalTrajectory classical_trajectory(const PotentialSpec& potential, const Grid& grid, double x0,
                                         double p0, double t_end, double dt);

// `grid` supplies n, L and M; hbar is replaced per sweep entry. The packet has
// fixed position width sigma0 and mean momentum p0 (k0 = p0 / hbar).
ClassicalRun classical_limit_sweep(const PotentialSpec& potential, const Grid& grid, double x0,
                                   double p0, double sigma0, const std::vector<double>& hbar_values,
                                   double t_end, double dt, std::size_t snapshot_every = 100);

struct TunnelingReport {
  bool applicable = false;   // false without a barrier of positive height
  double mean_energy = 0.0;
  double barrier_height = 0.0;
  double transmitted = 0.0;  // mass past the barrier (in the direction of motion) at t_end
  double min_kinetic_in_barrier = 0.0;
};

// Throws ConfigError when the packet's mean energy is not below the barrier.
TunnelingReport tunneling_probe(const Grid& grid, const PotentialSpec& barrier, const StateSpec& packet,
                                double t_end, double dt, std::size_t snapshot_every = 50);

// Self-convergence in time: runs at dt, dt/2, ..., dt/2^(levels-1) and
// compares successive final states, so the spatial error cancels.
struct ConvergenceStudy {
  std::vector<double> dts;
  std::vector<double> differences;  // ||psi_{dt_i} - psi_{dt_{i+1}}|| at t1
  std::vector<WaveField> finals;
  double observed_order = 0.0;      // log2 of the last difference ratio

  // Richardson estimate of the time-truncation error of the finest run.
  double finest_error() const;
};

ConvergenceStudy temporal_convergence(const WaveField& psi0, const PotentialSpec& potential, double t1,
                                      double dt, Scheme scheme, int levels = 3);

// Split-step against Crank-Nicolson at the finest step of a convergence study.
// The bound adds each scheme's Richardson time error and the spatial error of
// each scheme, estimated from the same run on a grid twice as fine.
struct SchemeComparison {
  ConvergenceStudy split;
  ConvergenceStudy crank_nicolson;
  double distance = 0.0;  // ||psi_split - psi_cn|| at t1, finest dt
  double split_space_error = 0.0;
  double cn_space_error = 0.0;

  double bound() const;
  bool within_bound() const { return distance <= bound(); }
};

SchemeComparison compare_schemes(const StateSpec& state, const Grid& grid, const PotentialSpec& potential,
                                 double t1, double dt, int levels = 3);

}  // namespace wavelab
