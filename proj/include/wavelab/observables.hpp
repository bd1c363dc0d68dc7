#pragma once

// Expectation values and local fields, each available through several
// algebraically equivalent routes so the routes can be checked against each
// other.

#include <string_view>

#include "wavelab/grid.hpp"
#include "wavelab/potential.hpp"

namespace wavelab {

enum class MomentumMethod { fourier_sum, real_space, phase_form };
enum class KineticMethod { fourier_sum, real_space, madelung_form };
enum class EnergyMethod { hamiltonian, time_derivative, eigen_expansion };
enum class FisherMethod { log_gradient, laplacian_form };

inline constexpr int kDefaultEigenCutoff = 32;

// An expectation value plus what was left out to get it. Phase-based routes
// skip sub-floor points; the skipped probability mass is reported, and
// `masked` is set when any point was skipped.
struct Estimate {
  double value = 0.0;
  double excluded_mass = 0.0;
  bool masked = false;
  // eigen_expansion only: 1 - sum |C_n|^2.
  double completeness_defect = 0.0;
};

// Local (per-point) quantities of a wave field. Fields derived from the
// phase or from 1/|Psi| are zero where valid_mask is false; `current_flux`
// (the Psi grad Psi* form) is defined everywhere.
struct LocalFields {
  std::vector<double> density;
  std::vector<double> momentum;           // hbar grad S
  std::vector<double> kinetic;            // p^2/2M + Q
  std::vector<double> quantum_potential;  // -hbar^2 lap|Psi| / (2M |Psi|)
  std::vector<double> current;            // rho u
  std::vector<double> current_flux;       // (i hbar / 2M)(Psi grad Psi* - Psi* grad Psi)
  std::vector<double> velocity;           // hbar grad S / M
  std::vector<double> total_energy;       // -hbar dS/dt
  Mask valid_mask;
};

double mean_position(const WaveField& psi);

Estimate mean_momentum(const WaveField& psi, MomentumMethod method,
                       double relative_floor = kDefaultDensityFloor);
Estimate mean_kinetic(const WaveField& psi, KineticMethod method,
                      double relative_floor = kDefaultDensityFloor);
// eigen_expansion throws UnsupportedMethodError unless the potential is harmonic.
Estimate mean_total_energy(const WaveField& psi, const PotentialSpec& potential, double t,
                           EnergyMethod method, int eigen_cutoff = kDefaultEigenCutoff);
// integral rho Q over the valid mask.
Estimate mean_quantum_potential(const WaveField& psi, double relative_floor = kDefaultDensityFloor);
Estimate fisher_information(const WaveField& psi, FisherMethod method,
                            double relative_floor = kDefaultDensityFloor);

LocalFields local_fields(const WaveField& psi, const PotentialSpec& potential, double t,
                         double relative_floor = kDefaultDensityFloor);

std::string_view to_string(MomentumMethod m) noexcept;
std::string_view to_string(KineticMethod m) noexcept;
std::string_view to_string(EnergyMethod m) noexcept;
std::string_view to_string(FisherMethod m) noexcept;

}  // namespace wavelab
