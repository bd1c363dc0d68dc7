#include "wavelab/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "wavelab/error.hpp"
#include "wavelab/kernels.hpp"
#include "wavelab/propagators.hpp"

namespace wavelab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_floor(std::span<const double> rho, double t) {
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  const double peak = *hi, low = *lo;
  if (!(peak > 0.0) || !(low >= kHydroHardFloor * peak)) {
    throw NodelessViolation("Madelung solver: density " + std::to_string(low) + " below the floor " +
                                std::to_string(kHydroHardFloor) + " x max at t = " + std::to_string(t),
                            t);
  }
}

std::vector<double> grad_phase(const Grid& g, std::span<const double> phase, int winding) {
  const double slope = winding * g.k_fundamental();
  std::vector<double> periodic(phase.size());
  for (std::size_t i = 0; i < periodic.size(); ++i) periodic[i] = phase[i] - slope * g.x(i);
  std::vector<double> grad = spectral_gradient(std::span<const double>(periodic), g);
  for (auto& v : grad) v += slope;
  return grad;
}

// Scratch space for the right-hand side, reused across RK4 stages.
class RateWorkspace {
 public:
  RateWorkspace(const Grid& g, const PotentialSpec& potential)
      : g_(g), potential_(potential), packed_(g.size()), out_(g.size()), flux_(g.size()), amp_(g.size()) {
    const std::size_t n = g.size();
    grad_.assign(g.gradient_multiplier().begin(), g.gradient_multiplier().end());
    lap_.assign(g.laplacian_multiplier().begin(), g.laplacian_multiplier().end());
    // The unpaired Nyquist mode has no real derivative.
    if (n % 2 == 0) grad_[n / 2] = 0.0;
    if (!potential_.is_time_dependent()) v_ = potential_.sample(g_, 0.0);
  }

  // Packs the periodic part of S and sqrt(rho) into one complex transform:
  // grad S and lap sqrt(rho) come back as real and imaginary parts.
  void rates(std::span<const double> rho, std::span<const double> phase, int winding, double t,
             std::vector<double>& drho, std::vector<double>& dphase) {
    check_floor(rho, t);
    const std::size_t n = g_.size();
    const double hbar = g_.hbar(), mass = g_.mass();
    const double slope = winding * g_.k_fundamental();

    for (std::size_t i = 0; i < n; ++i) {
      amp_[i] = std::sqrt(rho[i]);
      packed_[i] = cplx(phase[i] - slope * g_.x(i), amp_[i]);
    }
    detail::fft_forward(packed_, packed_);
    // F = A + iB with A, B the spectra of the two real inputs; out = i k A - i k^2 B.
    for (std::size_t j = 0; j < n; ++j) {
      const cplx f = packed_[j];
      const cplx m = packed_[j == 0 ? 0 : n - j];
      const double ar = 0.5 * (f.real() + m.real()), ai = 0.5 * (f.imag() - m.imag());
      const double br = 0.5 * (f.imag() + m.imag()), bi = -0.5 * (f.real() - m.real());
      const double cr = grad_[j] * ar + lap_[j] * br;
      const double ci = grad_[j] * ai + lap_[j] * bi;
      out_[j] = cplx(-ci, cr);
    }
    detail::fft_inverse(out_, out_);

    const double scale = hbar / mass;
    for (std::size_t i = 0; i < n; ++i) flux_[i] = cplx(rho[i] * scale * (out_[i].real() + slope), 0.0);
    detail::fft_forward(flux_, flux_);
    kernels::mul_imag(flux_, grad_);
    detail::fft_inverse(flux_, flux_);

    if (potential_.is_time_dependent()) v_ = potential_.sample(g_, t);
    drho.resize(n);
    dphase.resize(n);
    const double c = hbar / (2.0 * mass);
    for (std::size_t i = 0; i < n; ++i) {
      const double gs = out_[i].real() + slope;
      drho[i] = -flux_[i].real();
      dphase[i] = -c * gs * gs + c * out_[i].imag() / amp_[i] - v_[i] / hbar;
    }
  }

 private:
  const Grid& g_;
  const PotentialSpec& potential_;
  std::vector<cplx> packed_, out_, flux_;
  std::vector<double> amp_, grad_, lap_, v_;

 public:
  // RK4 stage storage.
  std::vector<double> k_rho[4], k_s[4];
};

double weighted_l2(std::span<const double> weight, std::span<const double> diff, const Grid& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i) s += weight[i] * diff[i] * diff[i];
  return std::sqrt(s * g.dx());
}

}  // namespace

HydroState::HydroState(MadelungField field, double time, int winding, double mass_correction)
    : field_(std::move(field)), time_(time), winding_(winding), mass_correction_(mass_correction) {
  check_floor(field_.density(), time_);
  const double mass = integrate(field_.density(), field_.grid());
  if (std::abs(mass - 1.0) > 1e-8) {
    throw ConfigError("HydroState: density must be normalized (mass = " + std::to_string(mass) + ")");
  }
}

HydroState HydroState::from_wavefield(const WaveField& psi, double time) {
  check_floor(psi.density(), time);
  MadelungField m = decompose(psi);
  const auto ph = m.phase();
  const double closing = ph.back() + std::remainder(ph.front() - ph.back(), kTwoPi);
  const int winding = static_cast<int>(std::lround((closing - ph.front()) / kTwoPi));
  return {std::move(m), time, winding};
}

std::vector<double> phase_gradient(const HydroState& state) {
  return grad_phase(state.grid(), state.field().phase(), state.winding());
}

std::vector<double> velocity(const HydroState& state) {
  std::vector<double> u = phase_gradient(state);
  const double scale = state.grid().hbar() / state.grid().mass();
  for (auto& v : u) v *= scale;
  return u;
}

MadelungRates madelung_rhs(const HydroState& state, const PotentialSpec& potential) {
  potential.validate(state.grid());
  MadelungRates r;
  RateWorkspace ws(state.grid(), potential);
  ws.rates(state.field().density(), state.field().phase(), state.winding(), state.time(), r.density_rate,
           r.phase_rate);
  return r;
}

namespace {

HydroState rk4_step(const HydroState& state, RateWorkspace& ws, double dt) {
  const Grid& g = state.grid();
  const std::size_t n = g.size();
  const int w = state.winding();
  const double t = state.time();
  const std::span<const double> rho0 = state.field().density();
  const std::span<const double> s0 = state.field().phase();

  auto& k_rho = ws.k_rho;
  auto& k_s = ws.k_s;
  std::vector<double> rho(n), s(n);
  ws.rates(rho0, s0, w, t, k_rho[0], k_s[0]);
  const double stage_dt[3] = {0.5 * dt, 0.5 * dt, dt};
  for (int stage = 0; stage < 3; ++stage) {
    std::copy(rho0.begin(), rho0.end(), rho.begin());
    std::copy(s0.begin(), s0.end(), s.begin());
    kernels::axpy(rho, stage_dt[stage], k_rho[stage]);
    kernels::axpy(s, stage_dt[stage], k_s[stage]);
    ws.rates(rho, s, w, t + stage_dt[stage], k_rho[stage + 1], k_s[stage + 1]);
  }

  std::copy(rho0.begin(), rho0.end(), rho.begin());
  std::copy(s0.begin(), s0.end(), s.begin());
  const double weights[4] = {dt / 6.0, dt / 3.0, dt / 3.0, dt / 6.0};
  for (int stage = 0; stage < 4; ++stage) {
    kernels::axpy(rho, weights[stage], k_rho[stage]);
    kernels::axpy(s, weights[stage], k_s[stage]);
  }
  check_floor(rho, t + dt);

  const double mass = integrate(rho, g);
  const double correction = std::abs(mass - 1.0);
  if (!(correction < kHydroMassTolerance)) {
    throw NumericalError("Madelung step lost mass: |mass - 1| = " + std::to_string(correction) +
                         " at t = " + std::to_string(t + dt));
  }
  for (auto& v : rho) v /= mass;
  return {MadelungField(g, std::move(rho), std::move(s)), t + dt, w, correction};
}

}  // namespace

HydroState hydro_step(const HydroState& state, const PotentialSpec& potential, double dt) {
  if (dt == 0.0) return state;
  potential.validate(state.grid());
  RateWorkspace ws(state.grid(), potential);
  return rk4_step(state, ws, dt);
}

HydroTrajectory hydro_evolve(const HydroState& initial, const PotentialSpec& potential, double t1,
                             double dt, std::size_t snapshot_every) {
  if (snapshot_every == 0) throw ConfigError("snapshot_every must be >= 1");
  potential.validate(initial.grid());
  const double t0 = initial.time();
  const std::size_t steps = step_count(t0, t1, dt);
  HydroTrajectory out;
  out.states.push_back(initial);
  out.times.push_back(t0);
  HydroState cur = initial;
  RateWorkspace ws(initial.grid(), potential);
  for (std::size_t k = 0; k < steps; ++k) {
    cur = rk4_step(cur, ws, dt);
    out.max_mass_correction = std::max(out.max_mass_correction, cur.mass_correction());
    if ((k + 1) % snapshot_every == 0 || k + 1 == steps) {
      out.states.push_back(cur);
      out.times.push_back(cur.time());
    }
  }
  return out;
}

double EquivalenceReport::max_density_l2() const {
  return density_l2.empty() ? 0.0 : *std::max_element(density_l2.begin(), density_l2.end());
}
double EquivalenceReport::max_velocity_l2() const {
  return velocity_l2.empty() ? 0.0 : *std::max_element(velocity_l2.begin(), velocity_l2.end());
}
double EquivalenceReport::max_phase_rms() const {
  return phase_rms.empty() ? 0.0 : *std::max_element(phase_rms.begin(), phase_rms.end());
}

EquivalenceReport equivalence_report(const WaveField& psi0, const PotentialSpec& potential, double t1,
                                     double dt, std::size_t snapshot_every) {
  const Grid& g = psi0.grid();
  const HydroState h0 = HydroState::from_wavefield(psi0, 0.0);
  const HydroTrajectory hydro = hydro_evolve(h0, potential, t1, dt, snapshot_every);
  const EvolutionResult schrodinger = evolve(psi0, potential, 0.0, t1, dt, Scheme::split, snapshot_every);

  EquivalenceReport rep;
  const std::size_t n = g.size();
  for (std::size_t k = 0; k < hydro.states.size(); ++k) {
    const HydroState& h = hydro.states[k];
    const HydroState s = HydroState::from_wavefield(schrodinger.snapshots[k], schrodinger.times[k]);
    const auto rho_h = h.field().density();
    const auto rho_s = s.field().density();

    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = rho_h[i] - rho_s[i];
    const std::vector<double> unit(n, 1.0);
    const double d_rho = weighted_l2(unit, diff, g);

    const std::vector<double> u_h = velocity(h);
    const std::vector<double> u_s = velocity(s);
    for (std::size_t i = 0; i < n; ++i) diff[i] = u_h[i] - u_s[i];
    const double d_u = weighted_l2(rho_s, diff, g);

    cplx mean_offset{};
    for (std::size_t i = 0; i < n; ++i) {
      diff[i] = std::remainder(h.field().phase()[i] - s.field().phase()[i], kTwoPi);
      mean_offset += rho_s[i] * std::polar(1.0, diff[i]);
    }
    const double offset = std::arg(mean_offset);
    for (auto& d : diff) d = std::remainder(d - offset, kTwoPi);
    const double d_phase = weighted_l2(rho_s, diff, g);

    rep.times.push_back(hydro.times[k]);
    rep.density_l2.push_back(d_rho);
    rep.velocity_l2.push_back(d_u);
    rep.phase_rms.push_back(d_phase);
  }
  return rep;
}

}  // namespace wavelab
