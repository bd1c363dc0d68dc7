#include "wavelab/propagators.hpp"

#include <cmath>
#include <string>
#include <variant>

#include "fft.hpp"
#include "wavelab/error.hpp"
#include "wavelab/hamiltonian.hpp"
#include "wavelab/kernels.hpp"

namespace wavelab {

std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::split ? "split" : "cn";
}

SplitStepper::SplitStepper(const Grid& grid, PotentialSpec potential, double dt)
    : grid_(grid), potential_(std::move(potential)), dt_(dt) {
  potential_.validate(grid_);
  const std::size_t n = grid_.size();
  kinetic_phase_.resize(n);
  potential_phase_.resize(n);
  const double a = grid_.hbar() * dt_ / (2.0 * grid_.mass());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = grid_.k(j);
    kinetic_phase_[j] = std::polar(inv_n, -a * k * k);
  }
}

void SplitStepper::potential_phases(double t_mid) {
  if (potential_cached_ && !potential_.is_time_dependent()) return;
  const double b = dt_ / (2.0 * grid_.hbar());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    potential_phase_[i] = std::polar(1.0, -b * potential_.value(t_mid, grid_.x(i), grid_));
  }
  potential_cached_ = true;
}

void SplitStepper::advance(std::vector<cplx>& psi, double t) {
  if (psi.size() != grid_.size()) throw StructuralError("SplitStepper: field size mismatch");
  potential_phases(t + 0.5 * dt_);
  kernels::mul(psi, potential_phase_);
  detail::fft_forward(psi, psi);
  kernels::mul(psi, kinetic_phase_);
  detail::fft_inverse(psi, psi);
  kernels::mul(psi, potential_phase_);
}

CrankNicolsonStepper::CrankNicolsonStepper(const Grid& grid, PotentialSpec potential, double dt)
    : grid_(grid), potential_(std::move(potential)), dt_(dt) {
  if (grid_.size() < 3) throw ConfigError("Crank-Nicolson needs at least 3 grid points");
  potential_.validate(grid_);
  beta_ = dt_ / (2.0 * grid_.hbar());
  coupling_ = grid_.hbar() * grid_.hbar() / (2.0 * grid_.mass() * grid_.dx() * grid_.dx());
  off_ = cplx(0.0, -beta_ * coupling_);
}

void CrankNicolsonStepper::factorize(double t_mid) {
  if (factor_cached_ && !potential_.is_time_dependent()) return;
  const std::size_t n = grid_.size();
  v_ = potential_.sample(grid_, t_mid);
  diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) diag_[i] = cplx(1.0, beta_ * (2.0 * coupling_ + v_[i]));

  // Sherman-Morrison: A = T + u v^T with corners folded into T's end diagonals.
  gamma_ = -diag_[0];
  std::vector<cplx> t_diag = diag_;
  t_diag[0] -= gamma_;
  t_diag[n - 1] -= off_ * off_ / gamma_;

  c_prime_.resize(n);
  inv_pivot_.resize(n);
  cplx pivot = t_diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = t_diag[i] - off_ * c_prime_[i - 1];
    if (!std::isfinite(pivot.real()) || !std::isfinite(pivot.imag()) || std::abs(pivot) < 1e-300) {
      throw NumericalError("Crank-Nicolson: singular pivot at row " + std::to_string(i) +
                           " (|pivot| = " + std::to_string(std::abs(pivot)) +
                           ", dt = " + std::to_string(dt_) + ")");
    }
    inv_pivot_[i] = 1.0 / pivot;
    c_prime_[i] = off_ * inv_pivot_[i];
  }

  z_.assign(n, cplx{});
  z_[0] = gamma_;
  z_[n - 1] = off_;
  thomas(z_);
  sm_denominator_ = 1.0 + z_[0] + off_ / gamma_ * z_[n - 1];
  if (std::abs(sm_denominator_) < 1e-300) {
    throw NumericalError("Crank-Nicolson: Sherman-Morrison denominator vanished");
  }
  factor_cached_ = true;
}

void CrankNicolsonStepper::thomas(std::vector<cplx>& d) const {
  const std::size_t n = d.size();
  d[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) d[i] = (d[i] - off_ * d[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c_prime_[i] * d[i + 1];
}

void CrankNicolsonStepper::advance(std::vector<cplx>& psi, double t) {
  const std::size_t n = grid_.size();
  if (psi.size() != n) throw StructuralError("CrankNicolsonStepper: field size mismatch");
  if (dt_ == 0.0) return;
  factorize(t + 0.5 * dt_);

  // rhs = (1 - i beta H) psi
  std::vector<cplx> rhs(n);
  const cplx minus_i_beta(0.0, -beta_);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx left = psi[i == 0 ? n - 1 : i - 1];
    const cplx right = psi[i + 1 == n ? 0 : i + 1];
    const cplx h_psi = -coupling_ * (right - 2.0 * psi[i] + left) + v_[i] * psi[i];
    rhs[i] = psi[i] + minus_i_beta * h_psi;
  }
  thomas(rhs);
  const cplx factor = (rhs[0] + off_ / gamma_ * rhs[n - 1]) / sm_denominator_;
  for (std::size_t i = 0; i < n; ++i) psi[i] = rhs[i] - factor * z_[i];
}

WaveField step_split(const WaveField& psi, const PotentialSpec& potential, double t, double dt) {
  SplitStepper stepper(psi.grid(), potential, dt);
  std::vector<cplx> v(psi.values().begin(), psi.values().end());
  stepper.advance(v, t);
  return {psi.grid(), std::move(v)};
}

WaveField step_cn(const WaveField& psi, const PotentialSpec& potential, double t, double dt) {
  if (!(dt >= 0.0)) throw ConfigError("Crank-Nicolson step needs dt >= 0");
  CrankNicolsonStepper stepper(psi.grid(), potential, dt);
  std::vector<cplx> v(psi.values().begin(), psi.values().end());
  stepper.advance(v, t);
  return {psi.grid(), std::move(v)};
}

std::size_t step_count(double t0, double t1, double dt) {
  const double span = t1 - t0;
  if (span == 0.0) return 0;
  if (dt == 0.0 || !std::isfinite(dt)) throw ConfigError("time step must be finite and nonzero");
  const double ratio = span / dt;
  if (ratio < 0.0) throw ConfigError("time step points away from the end time");
  const double steps = std::round(ratio);
  if (std::abs(steps * dt - span) > 1e-9 * std::max(1.0, std::abs(span))) {
    throw ConfigError("time step does not divide the interval [t0, t1]");
  }
  return static_cast<std::size_t>(steps);
}

EvolutionResult evolve(const WaveField& psi0, const PotentialSpec& potential, double t0, double t1,
                       double dt, Scheme scheme, std::size_t snapshot_every) {
  if (snapshot_every == 0) throw ConfigError("snapshot_every must be >= 1");
  const std::size_t steps = step_count(t0, t1, dt);
  const Grid& g = psi0.grid();

  EvolutionResult out;
  out.scheme = scheme;
  out.steps = steps;
  out.snapshots.push_back(psi0);
  out.times.push_back(t0);
  if (steps == 0) return out;

  std::variant<SplitStepper, CrankNicolsonStepper> stepper =
      scheme == Scheme::split
          ? std::variant<SplitStepper, CrankNicolsonStepper>(std::in_place_index<0>, g, potential, dt)
          : std::variant<SplitStepper, CrankNicolsonStepper>(std::in_place_index<1>, g, potential, dt);
  std::vector<cplx> psi(psi0.values().begin(), psi0.values().end());
  const double norm0 = psi0.norm_squared();
  double prev_norm = norm0;

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    std::visit([&](auto& s) { s.advance(psi, t); }, stepper);
    const double norm = kernels::sum_abs2(psi) * g.dx();
    const double t_next = t0 + static_cast<double>(k + 1) * dt;
    if (!std::isfinite(norm)) {
      throw DivergenceError("evolution diverged (non-finite field) at step " + std::to_string(k + 1) +
                                ", t = " + std::to_string(t_next),
                            k + 1, t_next);
    }
    out.norm_drift = std::max(out.norm_drift, std::abs(norm - norm0));
    out.max_step_norm_change = std::max(out.max_step_norm_change, std::abs(norm - prev_norm));
    prev_norm = norm;
    if ((k + 1) % snapshot_every == 0 || k + 1 == steps) {
      out.snapshots.emplace_back(g, psi);
      out.times.push_back(k + 1 == steps ? t1 : t_next);
    }
  }
  return out;
}

}  // namespace wavelab
