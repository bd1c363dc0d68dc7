#pragma once

#include "wavelab/grid.hpp"
#include "wavelab/potential.hpp"

namespace wavelab {

// H psi = -hbar^2/(2M) psi'' + V(t, x) psi, kinetic part spectral.
WaveField apply_hamiltonian(const WaveField& psi, const PotentialSpec& potential, double t);

// d psi / dt = -(i / hbar) H psi, straight from the Schrodinger equation.
WaveField time_derivative(const WaveField& psi, const PotentialSpec& potential, double t);

}  // namespace wavelab
