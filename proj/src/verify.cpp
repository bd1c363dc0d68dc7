#include "wavelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wavelab/error.hpp"
#include "wavelab/hamiltonian.hpp"
#include "wavelab/observables.hpp"

namespace wavelab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Fraction of the norm carried by |k| > 0.8 k_max, and by the outer 5% of the box on each side.
bool packet_resolved(const WaveField& psi) {
  const Grid& g = psi.grid();
  const MomentumAmplitudes a = to_momentum(psi);
  double high = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(g.k(j)) > 0.8 * g.k_max()) high += std::norm(a[j]);
  }
  double edge = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = g.x(i);
    if (x < 0.05 * g.length() || x > 0.95 * g.length()) edge += std::norm(psi[i]);
  }
  edge *= g.dx();
  return high < 1e-8 && edge < 1e-8;
}

}  // namespace

double ResidualSeries::max_continuity() const { return max_of(continuity_residual); }
double ResidualSeries::max_qhj() const { return max_of(qhj_residual); }

ResidualSeries residuals(const EvolutionResult& trajectory, const PotentialSpec& potential,
                         double relative_floor) {
  ResidualSeries out;
  for (std::size_t s = 0; s < trajectory.snapshots.size(); ++s) {
    const WaveField& psi = trajectory.snapshots[s];
    const double t = trajectory.times[s];
    const Grid& g = psi.grid();
    const std::size_t n = psi.size();
    const double hbar = g.hbar(), mass = g.mass();

    const WaveField dpsi = time_derivative(psi, potential, t);
    const std::vector<cplx> grad_psi = spectral_gradient(psi.values(), g);
    std::vector<double> j(n);
    for (std::size_t i = 0; i < n; ++i) j[i] = hbar / mass * (std::conj(psi[i]) * grad_psi[i]).imag();
    const std::vector<double> div_j = spectral_gradient(std::span<const double>(j), g);
    double cont = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double drho = 2.0 * (std::conj(psi[i]) * dpsi[i]).real();
      const double r = drho + div_j[i];
      cont += r * r;
    }

    const std::vector<double> rho = psi.density();
    const MaskedField grad_s = phase_gradient(psi, relative_floor);
    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i) amp[i] = std::sqrt(rho[i]);
    const std::vector<double> lap_amp = spectral_laplacian(std::span<const double>(amp), g);
    const double c = hbar * hbar / (2.0 * mass);
    double qhj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!grad_s.valid[i]) continue;
      const double ds_dt = (dpsi[i] / psi[i]).imag();
      const double gs = grad_s.values[i];
      const double r = hbar * ds_dt + c * (gs * gs - lap_amp[i] / amp[i]) + potential.value(t, g.x(i), g);
      qhj += rho[i] * r * r;
    }

    out.times.push_back(t);
    out.continuity_residual.push_back(std::sqrt(cont * g.dx()));
    out.qhj_residual.push_back(std::sqrt(qhj * g.dx()));
    out.mask_fraction.push_back(std::clamp(excluded_mass(rho, grad_s.valid, g), 0.0, 1.0));
  }
  return out;
}

RecoveredPotential recover_potential(const WaveField& psi, const PotentialSpec& potential, double t,
                                     double relative_floor) {
  const Grid& g = psi.grid();
  const std::size_t n = psi.size();
  const WaveField dpsi = time_derivative(psi, potential, t);
  const std::vector<cplx> lap = spectral_laplacian(psi.values(), g);
  const std::vector<double> rho = psi.density();
  const double c = g.hbar() * g.hbar() / (2.0 * g.mass());
  const cplx i_hbar(0.0, g.hbar());

  RecoveredPotential out;
  out.valid = density_mask(rho, relative_floor);
  out.values.assign(n, 0.0);
  std::vector<double> diff;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.valid[i]) continue;
    const cplx q = (i_hbar * dpsi[i] + c * lap[i]) / psi[i];
    out.values[i] = q.real();
    out.max_imag = std::max(out.max_imag, std::abs(q.imag()));
    diff.push_back(q.real() - potential.value(t, g.x(i), g));
  }
  double mean = 0.0;
  for (double d : diff) {
    out.max_error = std::max(out.max_error, std::abs(d));
    mean += d;
  }
  if (!diff.empty()) mean /= static_cast<double>(diff.size());
  for (double d : diff) out.max_error_offset = std::max(out.max_error_offset, std::abs(d - mean));
  return out;
}

double DispersionResult::error() const { return std::abs(omega_measured - omega_predicted); }

DispersionResult dispersion_check(const Grid& grid, double k0, double v0, double t_end, double dt) {
  const std::size_t steps = step_count(0.0, t_end, dt);
  if (steps == 0) throw ConfigError("dispersion check needs t_end > 0");
  const WaveField psi0 = sample(StateSpec::plane_wave(k0), grid);
  const PotentialSpec potential = PotentialSpec::constant(v0);
  SplitStepper stepper(grid, potential, dt);
  std::vector<cplx> psi(psi0.values().begin(), psi0.values().end());

  std::vector<double> times{0.0}, phases{0.0};
  double prev = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    stepper.advance(psi, static_cast<double>(k) * dt);
    const double raw = std::arg(inner_product(psi0, WaveField(grid, psi)));
    const double unwrapped = prev + std::remainder(raw - prev, kTwoPi);
    prev = unwrapped;
    times.push_back(static_cast<double>(k + 1) * dt);
    phases.push_back(unwrapped);
  }
  DispersionResult r;
  r.omega_measured = -fit_slope(times, phases);
  r.omega_predicted = grid.hbar() * k0 * k0 / (2.0 * grid.mass()) + v0 / grid.hbar();
  return r;
}

ClassicalTrajectory classical_trajectory(const PotentialSpec& potential, const Grid& grid, double x0,
                                         double p0, double t_end, double dt) {
  const std::size_t steps = step_count(0.0, t_end, dt);
  const double mass = grid.mass();
  ClassicalTrajectory tr;
  double x = x0, p = p0;
  tr.times.push_back(0.0);
  tr.x.push_back(x);
  tr.p.push_back(p);
  auto force = [&](double t, double q) { return -potential.gradient(t, q, grid); };
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double kx1 = p / mass, kp1 = force(t, x);
    const double kx2 = (p + 0.5 * dt * kp1) / mass, kp2 = force(t + 0.5 * dt, x + 0.5 * dt * kx1);
    const double kx3 = (p + 0.5 * dt * kp2) / mass, kp3 = force(t + 0.5 * dt, x + 0.5 * dt * kx2);
    const double kx4 = (p + dt * kp3) / mass, kp4 = force(t + dt, x + dt * kx3);
    x += dt / 6.0 * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
    p += dt / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4);
    tr.times.push_back(static_cast<double>(k + 1) * dt);
    tr.x.push_back(x);
    tr.p.push_back(p);
  }
  return tr;
}

ClassicalRun classical_limit_sweep(const PotentialSpec& potential, const Grid& grid, double x0,
                                   double p0, double sigma0, const std::vector<double>& hbar_values,
                                   double t_end, double dt, std::size_t snapshot_every) {
  if (hbar_values.empty()) throw ConfigError("classical sweep needs at least one hbar value");
  for (std::size_t i = 0; i < hbar_values.size(); ++i) {
    if (!(hbar_values[i] > 0.0)) throw ConfigError("classical sweep: hbar values must be positive");
    if (i > 0 && !(hbar_values[i] < hbar_values[i - 1])) {
      throw ConfigError("classical sweep: hbar values must be strictly decreasing");
    }
  }
  if (snapshot_every == 0) throw ConfigError("snapshot_every must be >= 1");
  potential.validate(grid);
  const std::size_t steps = step_count(0.0, t_end, dt);
  const ClassicalTrajectory oracle = classical_trajectory(potential, grid, x0, p0, t_end, dt);

  ClassicalRun run;
  run.hbar_values = hbar_values;
  for (double hbar : hbar_values) {
    const Grid g = grid.with_hbar(hbar);
    double err = std::numeric_limits<double>::quiet_NaN();
    double share = std::numeric_limits<double>::quiet_NaN();
    bool ok = true;
    try {
      const WaveField psi0 = sample(StateSpec::gaussian_packet(x0, sigma0, p0 / hbar), g);
      ok = packet_resolved(psi0);
      share = mean_quantum_potential(psi0).value / mean_kinetic(psi0, KineticMethod::fourier_sum).value;
      SplitStepper stepper(g, potential, dt);
      std::vector<cplx> psi(psi0.values().begin(), psi0.values().end());
      err = 0.0;
      for (std::size_t k = 0; k < steps && ok; ++k) {
        stepper.advance(psi, static_cast<double>(k) * dt);
        if ((k + 1) % snapshot_every == 0 || k + 1 == steps) {
          const WaveField snap(g, psi);
          err = std::max(err, std::abs(mean_position(snap) - oracle.x[k + 1]));
          if (!packet_resolved(snap)) ok = false;
        }
      }
    } catch (const ConfigError&) {
      ok = false;
    }
    run.packet_center_error.push_back(err);
    run.quantum_potential_share.push_back(share);
    run.resolved.push_back(ok);
  }

  std::vector<double> log_h, log_share, errs;
  for (std::size_t i = 0; i < hbar_values.size(); ++i) {
    if (!run.resolved[i]) continue;
    log_h.push_back(std::log(hbar_values[i]));
    log_share.push_back(std::log(run.quantum_potential_share[i]));
    errs.push_back(run.packet_center_error[i]);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    if (errs[i] > 1.1 * errs[i - 1]) run.monotone = false;
  }
  run.degenerate = !errs.empty() && max_of(errs) < 1e-6 * grid.length();
  run.share_slope = fit_slope(log_h, log_share);
  return run;
}

TunnelingReport tunneling_probe(const Grid& grid, const PotentialSpec& barrier, const StateSpec& packet,
                                double t_end, double dt, std::size_t snapshot_every) {
  if (barrier.kind() != PotentialKind::barrier) {
    throw ConfigError("tunneling probe needs a barrier potential, got " + std::string(to_string(barrier.kind())));
  }
  if (snapshot_every == 0) throw ConfigError("snapshot_every must be >= 1");
  barrier.validate(grid);
  const WaveField psi0 = sample(packet, grid);

  TunnelingReport rep;
  rep.barrier_height = barrier.strength();
  rep.mean_energy = mean_total_energy(psi0, barrier, 0.0, EnergyMethod::hamiltonian).value;
  rep.applicable = rep.barrier_height > 0.0;
  if (rep.applicable && !(rep.mean_energy < rep.barrier_height)) {
    throw ConfigError("tunneling probe: packet energy " + std::to_string(rep.mean_energy) +
                      " is not below the barrier height " + std::to_string(rep.barrier_height));
  }
  const bool rightward = mean_momentum(psi0, MomentumMethod::fourier_sum).value >= 0.0;

  const std::size_t steps = step_count(0.0, t_end, dt);
  SplitStepper stepper(grid, barrier, dt);
  std::vector<cplx> psi(psi0.values().begin(), psi0.values().end());
  rep.min_kinetic_in_barrier = std::numeric_limits<double>::infinity();
  auto scan = [&](const WaveField& w, double t) {
    const LocalFields f = local_fields(w, barrier, t);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double x = grid.x(i);
      if (f.valid_mask[i] && x >= barrier.x_a() && x <= barrier.x_b()) {
        rep.min_kinetic_in_barrier = std::min(rep.min_kinetic_in_barrier, f.kinetic[i]);
      }
    }
  };
  scan(psi0, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    stepper.advance(psi, static_cast<double>(k) * dt);
    if ((k + 1) % snapshot_every == 0 || k + 1 == steps) scan(WaveField(grid, psi), static_cast<double>(k + 1) * dt);
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = grid.x(i);
    if (rightward ? x > barrier.x_b() : x < barrier.x_a()) mass += std::norm(psi[i]);
  }
  rep.transmitted = mass * grid.dx();
  return rep;
}

double ConvergenceStudy::finest_error() const {
  if (differences.empty()) return 0.0;
  const double ratio = std::exp2(observed_order);
  return ratio > 1.0 ? differences.back() / (ratio - 1.0) : differences.back();
}

ConvergenceStudy temporal_convergence(const WaveField& psi0, const PotentialSpec& potential, double t1,
                                      double dt, Scheme scheme, int levels) {
  if (levels < 3) throw ConfigError("temporal convergence needs at least 3 levels");
  ConvergenceStudy c;
  double h = dt;
  for (int l = 0; l < levels; ++l, h *= 0.5) {
    const EvolutionResult r = evolve(psi0, potential, 0.0, t1, h, scheme, step_count(0.0, t1, h));
    c.dts.push_back(h);
    c.finals.push_back(r.snapshots.back());
    if (l > 0) c.differences.push_back(l2_distance(c.finals[l - 1], c.finals[l]));
  }
  const std::size_t m = c.differences.size();
  c.observed_order = std::log2(c.differences[m - 2] / c.differences[m - 1]);
  return c;
}

double SchemeComparison::bound() const {
  return split.finest_error() + crank_nicolson.finest_error() + split_space_error + cn_space_error;
}

SchemeComparison compare_schemes(const StateSpec& state, const Grid& grid, const PotentialSpec& potential,
                                 double t1, double dt, int levels) {
  SchemeComparison c;
  const WaveField psi0 = sample(state, grid);
  c.split = temporal_convergence(psi0, potential, t1, dt, Scheme::split, levels);
  c.crank_nicolson = temporal_convergence(psi0, potential, t1, dt, Scheme::crank_nicolson, levels);
  c.distance = l2_distance(c.split.finals.back(), c.crank_nicolson.finals.back());

  // Second order in dx: e(n) = 4/3 ||psi_n - psi_2n|| on the shared nodes.
  const Grid fine = grid.with_points(2 * grid.size());
  const WaveField fine0 = sample(state, fine);
  const double h = c.split.dts.back();
  auto space_error = [&](Scheme s, const WaveField& coarse_final) {
    const WaveField f = evolve(fine0, potential, 0.0, t1, h, s, step_count(0.0, t1, h)).snapshots.back();
    std::vector<cplx> shared(grid.size());
    for (std::size_t i = 0; i < shared.size(); ++i) shared[i] = f[2 * i];
    return 4.0 / 3.0 * l2_distance(coarse_final, WaveField(grid, shared));
  };
  c.split_space_error = space_error(Scheme::split, c.split.finals.back());
  c.cn_space_error = space_error(Scheme::crank_nicolson, c.crank_nicolson.finals.back());
  return c;
}

}  // namespace wavelab
