#include "wavelab/observables.hpp"

#include <cmath>

#include "wavelab/error.hpp"
#include "wavelab/hamiltonian.hpp"
#include "wavelab/kernels.hpp"
#include "wavelab/states.hpp"

namespace wavelab {
namespace {

std::vector<double> amplitude(std::span<const double> rho) {
  std::vector<double> a(rho.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::sqrt(rho[i]);
  return a;
}

// lap|Psi| / |Psi| on the valid mask, 0 elsewhere.
std::vector<double> curvature_ratio(std::span<const double> amp, const Mask& valid, const Grid& g) {
  const std::vector<double> lap = spectral_laplacian(amp, g);
  std::vector<double> r(amp.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (valid[i]) r[i] = lap[i] / amp[i];
  }
  return r;
}

Estimate masked_estimate(double value, std::span<const double> rho, const Mask& valid, const Grid& g) {
  Estimate e;
  e.value = value;
  e.excluded_mass = excluded_mass(rho, valid, g);
  for (bool v : valid) e.masked = e.masked || !v;
  return e;
}

}  // namespace

double mean_position(const WaveField& psi) {
  const std::vector<double> rho = psi.density();
  double s = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) s += psi.grid().x(i) * rho[i];
  return s * psi.grid().dx();
}

Estimate mean_momentum(const WaveField& psi, MomentumMethod method, double relative_floor) {
  const Grid& g = psi.grid();
  switch (method) {
    case MomentumMethod::fourier_sum: {
      const MomentumAmplitudes a = to_momentum(psi);
      double s = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) s += g.k(j) * std::norm(a[j]);
      return {g.hbar() * s};
    }
    case MomentumMethod::real_space: {
      // -i hbar/2 (Psi* grad Psi - Psi grad Psi*) = hbar Im(Psi* grad Psi)
      const std::vector<cplx> grad = spectral_gradient(psi.values(), g);
      return {g.hbar() * kernels::dot(psi.values(), grad).imag() * g.dx()};
    }
    case MomentumMethod::phase_form: {
      const std::vector<double> rho = psi.density();
      const MaskedField grad_s = phase_gradient(psi, relative_floor);
      double s = 0.0;
      for (std::size_t i = 0; i < rho.size(); ++i) {
        if (grad_s.valid[i]) s += rho[i] * grad_s.values[i];
      }
      return masked_estimate(g.hbar() * s * g.dx(), rho, grad_s.valid, g);
    }
  }
  return {};
}

Estimate mean_kinetic(const WaveField& psi, KineticMethod method, double relative_floor) {
  const Grid& g = psi.grid();
  const double scale = g.hbar() * g.hbar() / (2.0 * g.mass());
  switch (method) {
    case KineticMethod::fourier_sum: {
      const MomentumAmplitudes a = to_momentum(psi);
      double s = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) s += g.k(j) * g.k(j) * std::norm(a[j]);
      return {scale * s};
    }
    case KineticMethod::real_space: {
      // -hbar^2/2M * 1/2 (Psi* lap Psi + Psi lap Psi*) = -hbar^2/2M Re(Psi* lap Psi)
      const std::vector<cplx> lap = spectral_laplacian(psi.values(), g);
      return {-scale * kernels::dot(psi.values(), lap).real() * g.dx()};
    }
    case KineticMethod::madelung_form: {
      const std::vector<double> rho = psi.density();
      const MaskedField grad_s = phase_gradient(psi, relative_floor);
      const std::vector<double> curv = curvature_ratio(amplitude(rho), grad_s.valid, g);
      double s = 0.0;
      for (std::size_t i = 0; i < rho.size(); ++i) {
        if (grad_s.valid[i]) s += rho[i] * (grad_s.values[i] * grad_s.values[i] - curv[i]);
      }
      return masked_estimate(scale * s * g.dx(), rho, grad_s.valid, g);
    }
  }
  return {};
}

Estimate mean_total_energy(const WaveField& psi, const PotentialSpec& potential, double t,
                           EnergyMethod method, int eigen_cutoff) {
  const Grid& g = psi.grid();
  switch (method) {
    case EnergyMethod::hamiltonian: {
      const WaveField h_psi = apply_hamiltonian(psi, potential, t);
      return {inner_product(psi, h_psi).real()};
    }
    case EnergyMethod::time_derivative: {
      // i hbar/2 (Psi* dPsi/dt - Psi dPsi*/dt) = -hbar Im(Psi* dPsi/dt)
      const WaveField dpsi = time_derivative(psi, potential, t);
      return {-g.hbar() * inner_product(psi, dpsi).imag()};
    }
    case EnergyMethod::eigen_expansion: {
      if (potential.kind() != PotentialKind::harmonic) {
        throw UnsupportedMethodError("eigen_expansion needs a harmonic potential, got " +
                                     std::string(to_string(potential.kind())));
      }
      if (std::abs(potential.center(g) - 0.5 * g.length()) > 1e-12 * g.length()) {
        throw UnsupportedMethodError("eigen_expansion needs the oscillator centred at L/2");
      }
      if (eigen_cutoff < 0) throw ConfigError("eigen cutoff must be >= 0");
      const double omega = potential.strength();
      double energy = 0.0, weight = 0.0;
      for (int n = 0; n <= eigen_cutoff; ++n) {
        const WaveField basis = sample(StateSpec::ho_eigenstate(n, omega), g, {.check_resolution = false});
        const double c2 = std::norm(inner_product(basis, psi));
        energy += ho_energy(n, omega, g) * c2;
        weight += c2;
      }
      Estimate e{energy};
      e.completeness_defect = psi.norm_squared() - weight;
      return e;
    }
  }
  return {};
}

Estimate mean_quantum_potential(const WaveField& psi, double relative_floor) {
  const Grid& g = psi.grid();
  const std::vector<double> rho = psi.density();
  const Mask valid = density_mask(rho, relative_floor);
  const std::vector<double> curv = curvature_ratio(amplitude(rho), valid, g);
  const double scale = -g.hbar() * g.hbar() / (2.0 * g.mass());
  double s = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (valid[i]) s += rho[i] * scale * curv[i];
  }
  return masked_estimate(s * g.dx(), rho, valid, g);
}

Estimate fisher_information(const WaveField& psi, FisherMethod method, double relative_floor) {
  const Grid& g = psi.grid();
  const std::vector<double> rho = psi.density();
  const Mask valid = density_mask(rho, relative_floor);
  double s = 0.0;
  switch (method) {
    case FisherMethod::log_gradient: {
      // rho (grad ln rho)^2 with grad ln rho = grad rho / rho
      const std::vector<double> grad_rho = spectral_gradient(std::span<const double>(rho), g);
      for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!valid[i]) continue;
        const double log_grad = grad_rho[i] / rho[i];
        s += rho[i] * log_grad * log_grad;
      }
      break;
    }
    case FisherMethod::laplacian_form: {
      const std::vector<double> curv = curvature_ratio(amplitude(rho), valid, g);
      for (std::size_t i = 0; i < rho.size(); ++i) {
        if (valid[i]) s += -4.0 * rho[i] * curv[i];
      }
      break;
    }
  }
  return masked_estimate(s * g.dx(), rho, valid, g);
}

LocalFields local_fields(const WaveField& psi, const PotentialSpec& potential, double t,
                         double relative_floor) {
  const Grid& g = psi.grid();
  const std::size_t n = psi.size();
  const double hbar = g.hbar(), mass = g.mass();

  LocalFields f;
  f.density = psi.density();
  const MaskedField grad_s = phase_gradient(psi, relative_floor);
  f.valid_mask = grad_s.valid;
  const std::vector<double> curv = curvature_ratio(amplitude(f.density), f.valid_mask, g);
  const std::vector<cplx> grad_psi = spectral_gradient(psi.values(), g);
  const WaveField dpsi = time_derivative(psi, potential, t);

  f.momentum.assign(n, 0.0);
  f.kinetic.assign(n, 0.0);
  f.quantum_potential.assign(n, 0.0);
  f.current.assign(n, 0.0);
  f.current_flux.assign(n, 0.0);
  f.velocity.assign(n, 0.0);
  f.total_energy.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // (i hbar / 2M)(Psi grad Psi* - Psi* grad Psi) = (hbar / M) Im(Psi* grad Psi)
    f.current_flux[i] = hbar / mass * (std::conj(psi[i]) * grad_psi[i]).imag();
    if (!f.valid_mask[i]) continue;
    f.momentum[i] = hbar * grad_s.values[i];
    f.velocity[i] = f.momentum[i] / mass;
    f.quantum_potential[i] = -hbar * hbar / (2.0 * mass) * curv[i];
    f.kinetic[i] = f.momentum[i] * f.momentum[i] / (2.0 * mass) + f.quantum_potential[i];
    f.current[i] = f.density[i] * f.velocity[i];
    f.total_energy[i] = -hbar * (dpsi[i] / psi[i]).imag();
  }
  return f;
}

std::string_view to_string(MomentumMethod m) noexcept {
  switch (m) {
    case MomentumMethod::fourier_sum: return "fourier_sum";
    case MomentumMethod::real_space: return "real_space";
    case MomentumMethod::phase_form: return "phase_form";
  }
  return "?";
}

std::string_view to_string(KineticMethod m) noexcept {
  switch (m) {
    case KineticMethod::fourier_sum: return "fourier_sum";
    case KineticMethod::real_space: return "real_space";
    case KineticMethod::madelung_form: return "madelung_form";
  }
  return "?";
}

std::string_view to_string(EnergyMethod m) noexcept {
  switch (m) {
    case EnergyMethod::hamiltonian: return "hamiltonian";
    case EnergyMethod::time_derivative: return "time_derivative";
    case EnergyMethod::eigen_expansion: return "eigen_expansion";
  }
  return "?";
}

std::string_view to_string(FisherMethod m) noexcept {
  switch (m) {
    case FisherMethod::log_gradient: return "log_gradient";
    case FisherMethod::laplacian_form: return "laplacian_form";
  }
  return "?";
}

}  // namespace wavelab
