#include "wavelab/hamiltonian.hpp"

namespace wavelab {

WaveField apply_hamiltonian(const WaveField& psi, const PotentialSpec& potential, double t) {
  const Grid& g = psi.grid();
  potential.validate(g);
  std::vector<cplx> out = spectral_laplacian(psi.values(), g);
  const std::vector<double> v = potential.sample(g, t);
  const double kinetic = -g.hbar() * g.hbar() / (2.0 * g.mass());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = kinetic * out[i] + v[i] * psi[i];
  return {g, std::move(out)};
}

WaveField time_derivative(const WaveField& psi, const PotentialSpec& potential, double t) {
  return cplx(0.0, -1.0 / psi.grid().hbar()) * apply_hamiltonian(psi, potential, t);
}

}  // namespace wavelab
