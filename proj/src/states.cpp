#include "wavelab/states.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "wavelab/error.hpp"

namespace wavelab {
namespace {

constexpr double kTailTolerance = 1e-10;

// Normalized Hermite function psi_n(xi) by the three-term recurrence on the
// functions themselves (no raw polynomials, so no overflow for large n).
double hermite_function(int n, double xi) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  for (int m = 0; m < n; ++m) {
    const double next = std::sqrt(2.0 / (m + 1)) * xi * cur - std::sqrt(double(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Standard deviation of |psi|^2, the width measure used by the guard.
double density_width(const StateSpec& s, const Grid& g) {
  switch (s.kind) {
    case StateKind::gaussian_packet: return s.sigma0;
    case StateKind::ho_coherent: return oscillator_length(s.omega0, g) / std::sqrt(2.0);
    case StateKind::ho_eigenstate:
      return oscillator_length(s.omega0, g) * std::sqrt(s.n + 0.5);
    default: return 0.0;
  }
}

// Unnormalized analytic value at an arbitrary (not wrapped) position.
cplx evaluate(const StateSpec& s, double x, const Grid& g) {
  const double c = 0.5 * g.length();
  switch (s.kind) {
    case StateKind::plane_wave: return std::polar(1.0, s.k0 * x);
    case StateKind::gaussian_packet: {
      const double d = x - s.x0;
      return std::polar(std::exp(-d * d / (4.0 * s.sigma0 * s.sigma0)), s.k0 * x);
    }
    case StateKind::ho_eigenstate: {
      const double ell = oscillator_length(s.omega0, g);
      return hermite_function(s.n, (x - c) / ell) / std::sqrt(ell);
    }
    case StateKind::ho_coherent: {
      const double ell = oscillator_length(s.omega0, g);
      const double d = x - c - s.displacement;
      return std::polar(std::exp(-0.5 * d * d / (ell * ell)), s.k0 * d);
    }
    case StateKind::superposition: break;
  }
  return {};
}

int image_count(const StateSpec& s, const Grid& g) {
  const double ell = oscillator_length(s.omega0, g);
  double extent = 14.0 * density_width(s, g);
  if (s.kind == StateKind::ho_eigenstate) extent = (std::sqrt(2.0 * s.n + 1.0) + 8.0) * ell;
  return static_cast<int>(std::ceil(extent / g.length())) + 1;
}

void check_guard(const StateSpec& s, const Grid& g) {
  const double width = density_width(s, g);
  if (!(4.0 * width < g.length())) {
    throw ConfigError(std::string(to_string(s.kind)) + ": packet too wide for the domain (4 sigma >= L)");
  }
  if (!(width > 4.0 * g.dx())) {
    throw ConfigError(std::string(to_string(s.kind)) + ": packet under-resolved (sigma <= 4 dx)");
  }
  if (s.periodize) return;
  double inside = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    inside += std::norm(evaluate(s, x, g));
    outside += std::norm(evaluate(s, x - g.length(), g)) + std::norm(evaluate(s, x + g.length(), g));
  }
  if (!(outside <= kTailTolerance * inside)) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.3e", outside / inside);
    throw ConfigError(std::string(to_string(s.kind)) + ": wrap-around tails exceed 1e-10 of the norm (" +
                      ratio + ")");
  }
}

std::vector<cplx> raw_samples(const StateSpec& s, const Grid& g, SampleOptions opt) {
  std::vector<cplx> v(g.size());
  if (s.kind == StateKind::plane_wave) {
    g.index_of(s.k0);  // on-lattice check
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = evaluate(s, g.x(i), g);
    return v;
  }
  if (s.kind == StateKind::superposition) {
    for (const auto& c : s.components) {
      const WaveField part = sample(c.state, g, opt);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += c.weight * part[i];
    }
    return v;
  }
  if (opt.check_resolution) check_guard(s, g);
  if (s.periodize) {
    const int m_max = image_count(s, g);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (int m = -m_max; m <= m_max; ++m) v[i] += evaluate(s, g.x(i) + m * g.length(), g);
    }
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = evaluate(s, g.x(i), g);
  }
  return v;
}

}  // namespace

std::string_view to_string(StateKind kind) noexcept {
  switch (kind) {
    case StateKind::plane_wave: return "plane_wave";
    case StateKind::gaussian_packet: return "gaussian_packet";
    case StateKind::ho_eigenstate: return "ho_eigenstate";
    case StateKind::ho_coherent: return "ho_coherent";
    case StateKind::superposition: return "superposition";
  }
  return "unknown";
}

StateSpec StateSpec::plane_wave(double k0) {
  StateSpec s;
  s.kind = StateKind::plane_wave;
  s.k0 = k0;
  return s;
}

StateSpec StateSpec::gaussian_packet(double x0, double sigma0, double k0) {
  StateSpec s;
  s.kind = StateKind::gaussian_packet;
  s.x0 = x0;
  s.sigma0 = sigma0;
  s.k0 = k0;
  return s;
}

StateSpec StateSpec::ho_eigenstate(int n, double omega0) {
  StateSpec s;
  s.kind = StateKind::ho_eigenstate;
  s.n = n;
  s.omega0 = omega0;
  return s;
}

StateSpec StateSpec::ho_coherent(double omega0, double displacement, double k0) {
  StateSpec s;
  s.kind = StateKind::ho_coherent;
  s.omega0 = omega0;
  s.displacement = displacement;
  s.k0 = k0;
  return s;
}

StateSpec StateSpec::superposition(std::vector<StateComponent> components) {
  StateSpec s;
  s.kind = StateKind::superposition;
  s.components = std::move(components);
  return s;
}

void StateSpec::validate() const {
  if (!std::isfinite(k0) || !std::isfinite(x0) || !std::isfinite(displacement)) {
    throw ConfigError("state parameters must be finite");
  }
  switch (kind) {
    case StateKind::gaussian_packet:
      if (!(sigma0 > 0.0)) throw ConfigError("gaussian_packet sigma0 must be > 0");
      break;
    case StateKind::ho_eigenstate:
      if (n < 0) throw ConfigError("ho_eigenstate index must be >= 0");
      [[fallthrough]];
    case StateKind::ho_coherent:
      if (!(omega0 > 0.0)) throw ConfigError("omega0 must be > 0");
      break;
    case StateKind::superposition: {
      if (components.empty()) throw ConfigError("superposition needs at least one component");
      bool any = false;
      for (const auto& c : components) {
        c.state.validate();
        any = any || std::abs(c.weight) > 0.0;
      }
      if (!any) throw ConfigError("superposition weights are all zero");
      break;
    }
    case StateKind::plane_wave: break;
  }
}

WaveField sample(const StateSpec& spec, const Grid& grid, SampleOptions options) {
  spec.validate();
  return normalize(WaveField(grid, raw_samples(spec, grid, options)));
}

double free_packet_width(double sigma0, double t, const Grid& grid) {
  if (!(sigma0 > 0.0)) throw ConfigError("sigma0 must be > 0");
  const double r = grid.hbar() * t / (2.0 * grid.mass() * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + r * r);
}

double ho_energy(int n, double omega0, const Grid& grid) {
  if (n < 0) throw ConfigError("oscillator index must be >= 0");
  return grid.hbar() * omega0 * (n + 0.5);
}

double oscillator_length(double omega0, const Grid& grid) {
  return std::sqrt(grid.hbar() / (grid.mass() * omega0));
}

}  // namespace wavelab
