#pragma once

// Analytic reference wavefunctions with closed-form properties.

#include <string_view>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

enum class StateKind { plane_wave, gaussian_packet, ho_eigenstate, ho_coherent, superposition };

std::string_view to_string(StateKind kind) noexcept;

struct StateComponent;

struct StateSpec {
  StateKind kind = StateKind::gaussian_packet;
  double k0 = 0.0;            // carrier wavenumber
  double x0 = 0.0;            // gaussian_packet centre
  double sigma0 = 1.0;        // standard deviation of |psi|^2 (gaussian_packet)
  int n = 0;                  // ho_eigenstate index
  double omega0 = 1.0;        // oscillator frequency; potential centred at L/2
  double displacement = 0.0;  // ho_coherent offset of the centre from L/2
  // Sum periodic images instead of sampling a single copy. The result is
  // smooth and periodic by construction, so the tail guard is skipped.
  bool periodize = false;
  std::vector<StateComponent> components;

  static StateSpec plane_wave(double k0);
  static StateSpec gaussian_packet(double x0, double sigma0, double k0 = 0.0);
  static StateSpec ho_eigenstate(int n, double omega0 = 1.0);
  static StateSpec ho_coherent(double omega0, double displacement, double k0 = 0.0);
  static StateSpec superposition(std::vector<StateComponent> components);

  // Grid-independent invariants; throws ConfigError.
  void validate() const;
};

struct StateComponent {
  cplx weight;
  StateSpec state;
};

struct SampleOptions {
  // Width/extent guard: 4 sigma < L, sigma > 4 dx, wrap-around tails < 1e-10
  // of the norm. Only the resolution-failure probes turn this off.
  bool check_resolution = true;
};

// Normalized samples of the state. Throws ConfigError when the guard fails or
// a plane wave is off the wavenumber lattice.
WaveField sample(const StateSpec& spec, const Grid& grid, SampleOptions options = {});

// Exact position standard deviation of a free Gaussian packet at time t.
double free_packet_width(double sigma0, double t, const Grid& grid);

// hbar omega0 (n + 1/2)
double ho_energy(int n, double omega0, const Grid& grid);

// sqrt(hbar / (M omega0))
double oscillator_length(double omega0, const Grid& grid);

}  // namespace wavelab
