#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wavelab/error.hpp"
#include "wavelab/hamiltonian.hpp"
#include "wavelab/observables.hpp"
#include "wavelab/propagators.hpp"
#include "wavelab/states.hpp"

using namespace wavelab;
using std::numbers::pi;

namespace {

double position_sd(const WaveField& psi) {
  const double mean = mean_position(psi);
  const auto rho = psi.density();
  std::vector<double> w(rho.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rho[i] * std::pow(psi.grid().x(i) - mean, 2);
  return std::sqrt(integrate(w, psi.grid()));
}

// Take the n-point field's values at the even nodes of a 2n-point field.
WaveField decimate(const WaveField& fine, const Grid& coarse) {
  std::vector<cplx> v(coarse.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fine[2 * i];
  return {coarse, v};
}

}  // namespace

TEST_SUITE("propagators") {

TEST_CASE("hamiltonian is Hermitian and linear") {
  const Grid g(256, 30.0);
  const PotentialSpec V = PotentialSpec::barrier(1.0, 12.0, 14.0);
  for (int trial = 0; trial < 10; ++trial) {
    const WaveField a = sample(StateSpec::gaussian_packet(testing::uniform(13, 17), testing::uniform(1, 1.5), testing::uniform(-2, 2)), g);
    const WaveField b = sample(StateSpec::gaussian_packet(testing::uniform(13, 17), testing::uniform(1, 1.5), testing::uniform(-2, 2)), g);
    const cplx lhs = inner_product(a, apply_hamiltonian(b, V, 0.0));
    const cplx rhs = inner_product(apply_hamiltonian(a, V, 0.0), b);
    CHECK(std::abs(lhs - rhs) < 1e-12);

    const cplx ca(0.3, -1.1), cb(2.0, 0.5);
    const WaveField lin = apply_hamiltonian(ca * a + cb * b, V, 0.0);
    const WaveField sep = ca * apply_hamiltonian(a, V, 0.0) + cb * apply_hamiltonian(b, V, 0.0);
    CHECK(testing::max_abs_diff(lin.values(), sep.values()) < 1e-12);
  }
}

TEST_CASE("hamiltonian eigen residuals") {
  const Grid g(512, 20.0);
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  for (int n = 0; n <= 5; ++n) {
    const WaveField psi = sample(StateSpec::ho_eigenstate(n), g);
    const WaveField r = apply_hamiltonian(psi, V, 0.0) - cplx(ho_energy(n, 1.0, g), 0.0) * psi;
    CHECK(std::sqrt(r.norm_squared()) < 1e-6);
  }
  const Grid p(64, 2.0 * pi);
  const WaveField pw = sample(StateSpec::plane_wave(5.0), p);
  const WaveField h = apply_hamiltonian(pw, PotentialSpec::zero(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(h[i] - 12.5 * pw[i]) < 1e-12);
}

TEST_CASE("split step advances a plane wave by its exact phase") {
  const Grid g(64, 2.0 * pi, 0.9, 1.3);
  const double k0 = 4.0, dt = 0.013;
  const WaveField pw = sample(StateSpec::plane_wave(k0), g);
  const WaveField next = step_split(pw, PotentialSpec::zero(), 0.0, dt);
  const cplx factor = std::polar(1.0, -0.9 * k0 * k0 * dt / (2.0 * 1.3));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(next[i] - factor * pw[i]) < 1e-14);
}

TEST_CASE("coherent state follows the classical orbit") {
  const Grid g(512, 20.0);
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  const double a = 2.0;
  WaveField psi = sample(StateSpec::ho_coherent(1.0, a), g);
  const double dt = 1e-3;
  const auto full = static_cast<std::size_t>(2.0 * pi / dt);
  double t = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < full; ++k) {
    psi = step_split(psi, V, t, dt);
    t += dt;
    if (k % 250 == 0) worst = std::max(worst, std::abs(mean_position(psi) - 10.0 - a * std::cos(t)));
  }
  psi = step_split(psi, V, t, 2.0 * pi - t);
  CHECK(worst < 1e-6);
  CHECK(std::abs(mean_position(psi) - 10.0 - a) < 1e-6);
}

TEST_CASE("ground state is stationary over a period") {
  const Grid g(256, 20.0);
  const WaveField psi0 = sample(StateSpec::ho_eigenstate(0), g);
  const EvolutionResult r = evolve(psi0, PotentialSpec::harmonic(1.0), 0.0, 2.0 * pi, 2.0 * pi / 2000, Scheme::split, 2000);
  CHECK(std::abs(inner_product(r.snapshots.back(), psi0)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Crank-Nicolson examples") {
  const Grid g(256, 30.0);
  const WaveField psi0 = sample(StateSpec::gaussian_packet(15.0, 1.5, 1.0), g);
  const WaveField same = step_cn(psi0, PotentialSpec::harmonic(0.2), 0.0, 0.0);
  CHECK(testing::max_abs_diff(same.values(), psi0.values()) == 0.0);

  // Free spreading at dx = L/1024.
  const Grid h(1024, 40.0);
  const WaveField packet = sample(StateSpec::gaussian_packet(20.0, 1.0), h);
  const EvolutionResult r = evolve(packet, PotentialSpec::zero(), 0.0, 2.0, 1e-3, Scheme::crank_nicolson, 2000);
  CHECK(position_sd(r.snapshots.back()) == doctest::Approx(free_packet_width(1.0, 2.0, h)).epsilon(2e-4));
}

TEST_CASE("Crank-Nicolson approaches split step at second order") {
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  const double T = 1.0;
  double previous = 0.0;
  for (int level = 0; level < 3; ++level) {
    const Grid g(128u << level, 20.0);
    const double dt = 0.02 / (1 << level);
    const WaveField psi0 = sample(StateSpec::ho_coherent(1.0, 1.5), g);
    const WaveField a = evolve(psi0, V, 0.0, T, dt, Scheme::split, 1u << 20).snapshots.back();
    const WaveField b = evolve(psi0, V, 0.0, T, dt, Scheme::crank_nicolson, 1u << 20).snapshots.back();
    const double d = l2_distance(a, b);
    if (previous > 0.0) CHECK(previous / d >= 3.5);
    previous = d;
  }
}

TEST_CASE("evolve bookkeeping") {
  const Grid g(128, 20.0);
  const WaveField psi0 = sample(StateSpec::gaussian_packet(10.0, 1.0, 0.5), g);
  const EvolutionResult none = evolve(psi0, PotentialSpec::zero(), 1.0, 1.0, 0.01, Scheme::split, 1);
  REQUIRE(none.snapshots.size() == 1);
  CHECK(none.steps == 0);
  CHECK(testing::max_abs_diff(none.snapshots[0].values(), psi0.values()) == 0.0);

  const EvolutionResult r = evolve(psi0, PotentialSpec::zero(), 0.0, 1.0, 0.01, Scheme::split, 30);
  CHECK(r.steps == 100);
  REQUIRE(r.times.size() == 5);  // 0, 30, 60, 90, 100 steps
  for (std::size_t i = 1; i < r.times.size(); ++i) CHECK(r.times[i] > r.times[i - 1]);
  CHECK(r.times.back() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(evolve(psi0, PotentialSpec::zero(), 0.0, 1.0, 0.03, Scheme::split, 1), ConfigError);
  CHECK_THROWS_AS(evolve(psi0, PotentialSpec::zero(), 0.0, 1.0, -0.01, Scheme::split, 1), ConfigError);
  CHECK_THROWS_AS(step_count(0.0, 1.0, 0.3), ConfigError);
  CHECK(step_count(0.0, 2.0 * pi, 2.0 * pi / 6000) == 6000);
}

TEST_CASE("zero ramp is bitwise the static run") {
  const Grid g(128, 20.0);
  const WaveField psi0 = sample(StateSpec::gaussian_packet(10.0, 1.0, 0.5), g);
  const PotentialSpec V = PotentialSpec::well(0.7, 8.0, 12.0);
  for (Scheme s : {Scheme::split, Scheme::crank_nicolson}) {
    const EvolutionResult a = evolve(psi0, V, 0.0, 0.5, 0.01, s, 10);
    const EvolutionResult b = evolve(psi0, PotentialSpec::time_ramped(V, 0.0), 0.0, 0.5, 0.01, s, 10);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
      CHECK(testing::max_abs_diff(a.snapshots[k].values(), b.snapshots[k].values()) == 0.0);
    }
  }
}

TEST_CASE("backward evolution recovers the initial state") {
  const Grid g(256, 20.0);
  const PotentialSpec V = PotentialSpec::harmonic(0.7);
  const WaveField psi0 = sample(StateSpec::gaussian_packet(9.0, 1.0, 1.0), g);
  const EvolutionResult fwd = evolve(psi0, V, 0.0, 2.0, 1e-3, Scheme::split, 2000);
  const EvolutionResult back = evolve(fwd.snapshots.back(), V, 2.0, 0.0, -1e-3, Scheme::split, 2000);
  CHECK(back.times.back() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(l2_distance(back.snapshots.back(), psi0) < 1e-9);
}

TEST_CASE("unitarity") {
  const Grid g(256, 24.0);
  const PotentialSpec V = PotentialSpec::time_ramped(PotentialSpec::barrier(1.0, 11.0, 12.0), 0.3);
  const WaveField a0 = sample(StateSpec::gaussian_packet(9.0, 1.0, 1.0), g);
  const WaveField b0 = sample(StateSpec::gaussian_packet(14.0, 1.2, -0.5), g);

  const EvolutionResult split = evolve(a0, V, 0.0, 1.0, 1e-3, Scheme::split, 100);
  CHECK(split.max_step_norm_change < 1e-13);
  const EvolutionResult cn = evolve(a0, V, 0.0, 1.0, 1e-3, Scheme::crank_nicolson, 100);
  CHECK(cn.max_step_norm_change < 1e-10);

  // Inner products of co-evolved states over 1e4 steps.
  const cplx ip0 = inner_product(a0, b0);
  const double dt = 1e-3;
  SplitStepper sa(g, V, dt), sb(g, V, dt);
  std::vector<cplx> a(a0.values().begin(), a0.values().end()), b(b0.values().begin(), b0.values().end());
  for (int k = 0; k < 10000; ++k) {
    sa.advance(a, k * dt);
    sb.advance(b, k * dt);
  }
  CHECK(std::abs(inner_product(WaveField(g, a), WaveField(g, b)) - ip0) < 1e-9);
}

TEST_CASE("energy is conserved for a static potential") {
  const Grid g(256, 20.0);
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  const WaveField psi0 = sample(StateSpec::ho_coherent(1.0, 2.0), g);
  const EvolutionResult r = evolve(psi0, V, 0.0, 1.0, 1e-4, Scheme::split, 10000);
  const double e0 = mean_total_energy(r.snapshots.front(), V, 0.0, EnergyMethod::hamiltonian).value;
  const double e1 = mean_total_energy(r.snapshots.back(), V, 1.0, EnergyMethod::hamiltonian).value;
  CHECK(std::abs(e1 - e0) / e0 < 1e-8);
}

TEST_CASE("Crank-Nicolson spatial error is second order in dx") {
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  std::vector<double> diffs;
  WaveField prev = evolve(sample(StateSpec::ho_coherent(1.0, 1.0), Grid(128, 16.0)), V, 0.0, 0.5, 1e-3, Scheme::crank_nicolson, 1000).snapshots.back();
  for (std::size_t n : {256, 512}) {
    const Grid g(n, 16.0);
    const WaveField cur = evolve(sample(StateSpec::ho_coherent(1.0, 1.0), g), V, 0.0, 0.5, 1e-3, Scheme::crank_nicolson, 1000).snapshots.back();
    diffs.push_back(l2_distance(decimate(cur, prev.grid()), prev));
    prev = cur;
  }
  CHECK(diffs[0] / diffs[1] == doctest::Approx(4.0).epsilon(0.15));
}

}
