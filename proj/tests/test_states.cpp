#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "wavelab/error.hpp"
#include "wavelab/observables.hpp"
#include "wavelab/propagators.hpp"
#include "wavelab/states.hpp"

using namespace wavelab;

namespace {

double position_variance(const WaveField& psi) {
  const double mean = mean_position(psi);
  const auto rho = psi.density();
  std::vector<double> w(rho.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rho[i] * std::pow(psi.grid().x(i) - mean, 2);
  return integrate(w, psi.grid());
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("plane wave") {
  const Grid g(64, 2.0 * std::numbers::pi, 0.7);
  const WaveField psi = sample(StateSpec::plane_wave(3.0), g);
  for (const cplx& z : psi.values()) CHECK(std::abs(z) == doctest::Approx(1.0 / std::sqrt(g.length())).epsilon(1e-14));
  CHECK(mean_momentum(psi, MomentumMethod::fourier_sum).value == doctest::Approx(0.7 * 3.0).epsilon(1e-13));
  CHECK_THROWS_AS(sample(StateSpec::plane_wave(0.5), g), ConfigError);
}

TEST_CASE("oscillator ground state energies") {
  const Grid g(512, 20.0);
  const WaveField psi = sample(StateSpec::ho_eigenstate(0), g);
  CHECK(mean_total_energy(psi, PotentialSpec::harmonic(1.0), 0.0, EnergyMethod::hamiltonian).value ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(mean_kinetic(psi, KineticMethod::fourier_sum).value == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("centred Gaussian has zero mean momentum") {
  const Grid g(256, 20.0);
  const WaveField psi = sample(StateSpec::gaussian_packet(10.0, 1.0), g);
  CHECK(std::abs(mean_momentum(psi, MomentumMethod::fourier_sum).value) < 1e-14);
  CHECK(std::sqrt(position_variance(psi)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("free packet width") {
  const Grid g(64, 10.0);
  CHECK(free_packet_width(0.8, 0.0, g) == 0.8);
  CHECK(free_packet_width(1.0, 2.0, g) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (double t : {0.3, 1.7, 5.0}) CHECK(free_packet_width(1.3, t, g) == free_packet_width(1.3, -t, g));

  // Propagate and measure the second moment.
  const Grid h(1024, 60.0);
  const WaveField psi0 = sample(StateSpec::gaussian_packet(30.0, 1.0, 0.5), h);
  const EvolutionResult r = evolve(psi0, PotentialSpec::zero(), 0.0, 2.0, 0.01, Scheme::split, 200);
  CHECK(std::sqrt(position_variance(r.snapshots.back())) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("oscillator levels against the Rayleigh quotient") {
  const Grid g(512, 20.0);
  const PotentialSpec V = PotentialSpec::harmonic(1.0);
  CHECK(ho_energy(0, 1.0, g) == 0.5);
  CHECK(ho_energy(3, 1.0, g) == 3.5);
  for (int n = 0; n <= 5; ++n) {
    CAPTURE(n);
    const WaveField psi = sample(StateSpec::ho_eigenstate(n), g);
    const double rq = mean_total_energy(psi, V, 0.0, EnergyMethod::hamiltonian).value;
    CHECK(rq == doctest::Approx(ho_energy(n, 1.0, g)).epsilon(1e-6));
    CHECK(ho_energy(n, 2.0, g) == 2.0 * ho_energy(n, 1.0, g));
  }
  const Grid h(512, 24.0, 1.0, 2.0);
  const WaveField psi = sample(StateSpec::ho_eigenstate(2, 0.5), h);
  CHECK(mean_total_energy(psi, PotentialSpec::harmonic(0.5), 0.0, EnergyMethod::hamiltonian).value ==
        doctest::Approx(ho_energy(2, 0.5, h)).epsilon(1e-6));
}

TEST_CASE("oscillator eigenstates are orthonormal") {
  const Grid g(512, 20.0);
  std::vector<WaveField> basis;
  for (int n = 0; n <= 8; ++n) basis.push_back(sample(StateSpec::ho_eigenstate(n), g));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const cplx ip = inner_product(basis[a], basis[b]);
      CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("high eigenstates stay finite") {
  const WaveField psi = sample(StateSpec::ho_eigenstate(40), Grid(1024, 40.0));
  for (const cplx& z : psi.values()) CHECK(std::isfinite(z.real()));
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coherent state centroid") {
  for (double a : {-3.0, 0.5, 2.0}) {
    const Grid g(512, 24.0);
    const WaveField psi = sample(StateSpec::ho_coherent(1.0, a), g);
    CHECK(mean_position(psi) == doctest::Approx(12.0 + a).epsilon(1e-10));
  }
}

TEST_CASE("property: every sampled state is normalized") {
  for (int trial = 0; trial < 50; ++trial) {
    const Grid g(512, testing::uniform(20.0, 40.0), testing::uniform(0.5, 2.0), testing::uniform(0.5, 2.0));
    const double L = g.length();
    const WaveField p = sample(StateSpec::gaussian_packet(testing::uniform(0.4 * L, 0.6 * L),
                                                          testing::uniform(0.6, 0.05 * L), testing::uniform(-4.0, 4.0)),
                               g);
    CHECK(p.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const Grid g(512, 24.0);
  for (int n = 0; n < 6; ++n) CHECK(sample(StateSpec::ho_eigenstate(n), g).norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  const WaveField s = sample(StateSpec::superposition({{1.0, StateSpec::ho_eigenstate(0)}, {cplx(0.0, 2.0), StateSpec::ho_eigenstate(3)}}), g);
  CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invalid specs and the resolution guard") {
  const Grid g(256, 20.0);
  CHECK_THROWS_AS(StateSpec::gaussian_packet(10.0, 0.0).validate(), ConfigError);
  CHECK_THROWS_AS(StateSpec::ho_eigenstate(-1).validate(), ConfigError);
  CHECK_THROWS_AS(StateSpec::ho_eigenstate(0, -1.0).validate(), ConfigError);
  CHECK_THROWS_AS(StateSpec::superposition({{0.0, StateSpec::ho_eigenstate(0)}}).validate(), ConfigError);
  CHECK_THROWS_AS(sample(StateSpec::gaussian_packet(10.0, 5.0), g), ConfigError);        // 4 sigma >= L
  CHECK_THROWS_AS(sample(StateSpec::gaussian_packet(10.0, 0.2), g), ConfigError);        // sigma <= 4 dx
  CHECK_THROWS_AS(sample(StateSpec::gaussian_packet(1.0, 1.0), g), ConfigError);         // tail wraps
  CHECK_NOTHROW(sample(StateSpec::gaussian_packet(10.0, 0.2), g, {.check_resolution = false}));
}

}
