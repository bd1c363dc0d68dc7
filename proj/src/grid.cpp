#include "wavelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "wavelab/error.hpp"
#include "wavelab/kernels.hpp"

namespace wavelab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_size(std::size_t got, const Grid& grid, const char* what) {
  if (got != grid.size()) {
    throw StructuralError(std::string(what) + ": expected " + std::to_string(grid.size()) +
                          " samples, got " + std::to_string(got));
  }
}

// Forward transform, multiply by the given spectral factor, transform back.
template <class ApplyMultiplier>
std::vector<cplx> spectral_apply(std::span<const cplx> f, ApplyMultiplier apply) {
  std::vector<cplx> work(f.size());
  detail::fft_forward(f, work);
  apply(std::span<cplx>(work));
  detail::fft_inverse(work, work);
  return work;
}

std::vector<double> real_part(const std::vector<cplx>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](const cplx& c) { return c.real(); });
  return out;
}

}  // namespace

Grid::Grid(std::size_t n_points, double length, double hbar, double mass)
    : n_(n_points), length_(length), hbar_(hbar), mass_(mass) {
  if (n_points < 2) throw ConfigError("grid needs at least 2 points");
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("grid length must be > 0");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be > 0");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("mass must be > 0");
  dx_ = length / static_cast<double>(n_points);

  auto t = std::make_shared<Tables>();
  t->x.resize(n_);
  t->k.resize(n_);
  t->grad.resize(n_);
  t->lap.resize(n_);
  const double k1 = kTwoPi / length;
  const double inv_n = 1.0 / static_cast<double>(n_);
  const std::size_t first_negative = n_ - n_ / 2;
  for (std::size_t i = 0; i < n_; ++i) {
    t->x[i] = static_cast<double>(i) * dx_;
    const double j = i < first_negative ? static_cast<double>(i)
                                        : static_cast<double>(i) - static_cast<double>(n_);
    t->k[i] = k1 * j;
    t->grad[i] = t->k[i] * inv_n;
    t->lap[i] = -(t->k[i] * t->k[i]) * inv_n;
  }
  tables_ = std::move(t);
}

double Grid::k_fundamental() const noexcept { return kTwoPi / length_; }

double Grid::k_max() const noexcept { return std::numbers::pi / dx_; }

std::size_t Grid::index_of(double k) const {
  const double ratio = k / k_fundamental();
  const double j = std::round(ratio);
  if (std::abs(ratio - j) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw ConfigError("wavenumber " + std::to_string(k) + " is not on the grid lattice");
  }
  const auto half = static_cast<double>(n_ / 2);
  const double upper = static_cast<double>(n_ - n_ / 2);
  if (j < -half || j >= upper) {
    throw ConfigError("wavenumber " + std::to_string(k) + " exceeds the grid band");
  }
  return j >= 0 ? static_cast<std::size_t>(j) : static_cast<std::size_t>(j + static_cast<double>(n_));
}

WaveField::WaveField(Grid grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require_size(values_.size(), grid_, "WaveField");
}

double WaveField::norm_squared() const { return kernels::sum_abs2(values_) * grid_.dx(); }

std::vector<double> WaveField::density() const {
  std::vector<double> rho(values_.size());
  kernels::abs2(values_, rho);
  return rho;
}

WaveField operator+(const WaveField& a, const WaveField& b) {
  if (!(a.grid() == b.grid())) throw StructuralError("WaveField sum: grids differ");
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return {a.grid(), std::move(v)};
}

WaveField operator-(const WaveField& a, const WaveField& b) {
  if (!(a.grid() == b.grid())) throw StructuralError("WaveField difference: grids differ");
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return {a.grid(), std::move(v)};
}

WaveField operator*(cplx c, const WaveField& a) {
  std::vector<cplx> v(a.values().begin(), a.values().end());
  for (auto& z : v) z *= c;
  return {a.grid(), std::move(v)};
}

WaveField normalize(const WaveField& psi) {
  const double norm2 = psi.norm_squared();
  if (!(norm2 > 0.0)) throw DegenerateStateError("cannot normalize an all-zero field");
  return cplx(1.0 / std::sqrt(norm2), 0.0) * psi;
}

cplx inner_product(const WaveField& a, const WaveField& b) {
  if (!(a.grid() == b.grid())) throw StructuralError("inner product: grids differ");
  return kernels::dot(a.values(), b.values()) * a.grid().dx();
}

double l2_distance(const WaveField& a, const WaveField& b) {
  return std::sqrt((a - b).norm_squared());
}

MadelungField::MadelungField(Grid grid, std::vector<double> density, std::vector<double> phase,
                             Mask reliable)
    : grid_(std::move(grid)),
      density_(std::move(density)),
      phase_(std::move(phase)),
      reliable_(std::move(reliable)) {
  require_size(density_.size(), grid_, "MadelungField density");
  require_size(phase_.size(), grid_, "MadelungField phase");
  if (reliable_.empty()) reliable_.assign(grid_.size(), true);
  require_size(reliable_.size(), grid_, "MadelungField mask");
  for (std::size_t i = 0; i < density_.size(); ++i) {
    if (!(density_[i] >= 0.0)) {
      throw StructuralError("MadelungField: negative or NaN density at index " + std::to_string(i));
    }
  }
}

MomentumAmplitudes::MomentumAmplitudes(Grid grid, std::vector<cplx> amplitudes)
    : grid_(std::move(grid)), values_(std::move(amplitudes)) {
  require_size(values_.size(), grid_, "MomentumAmplitudes");
}

double integrate(std::span<const double> f, const Grid& grid) {
  require_size(f.size(), grid, "integrate");
  return kernels::sum(f) * grid.dx();
}

cplx integrate(std::span<const cplx> f, const Grid& grid) {
  require_size(f.size(), grid, "integrate");
  cplx s{};
  for (const auto& z : f) s += z;
  return s * grid.dx();
}

MomentumAmplitudes to_momentum(const WaveField& psi) {
  const Grid& g = psi.grid();
  std::vector<cplx> out(g.size());
  detail::fft_forward(psi.values(), out);
  // Parseval: sum |F_j|^2 = n sum |psi_i|^2, so scale by sqrt(dx / n).
  const double scale = std::sqrt(g.dx() / static_cast<double>(g.size()));
  for (auto& z : out) z *= scale;
  return {g, std::move(out)};
}

WaveField from_momentum(const MomentumAmplitudes& amplitudes) {
  const Grid& g = amplitudes.grid();
  std::vector<cplx> out(g.size());
  detail::fft_inverse(amplitudes.values(), out);
  const double scale = 1.0 / std::sqrt(g.dx() * static_cast<double>(g.size()));
  for (auto& z : out) z *= scale;
  return {g, std::move(out)};
}

std::vector<cplx> spectral_gradient(std::span<const cplx> f, const Grid& grid) {
  require_size(f.size(), grid, "spectral_gradient");
  return spectral_apply(f, [&](std::span<cplx> w) {
    kernels::mul_imag(w, grid.gradient_multiplier());
  });
}

std::vector<double> spectral_gradient(std::span<const double> f, const Grid& grid) {
  const std::vector<cplx> c(f.begin(), f.end());
  return real_part(spectral_gradient(std::span<const cplx>(c), grid));
}

std::vector<cplx> spectral_laplacian(std::span<const cplx> f, const Grid& grid) {
  require_size(f.size(), grid, "spectral_laplacian");
  return spectral_apply(f, [&](std::span<cplx> w) {
    kernels::mul_real(w, grid.laplacian_multiplier());
  });
}

std::vector<double> spectral_laplacian(std::span<const double> f, const Grid& grid) {
  const std::vector<cplx> c(f.begin(), f.end());
  return real_part(spectral_laplacian(std::span<const cplx>(c), grid));
}

Mask density_mask(std::span<const double> density, double relative_floor) {
  if (!(relative_floor > 0.0)) throw ConfigError("density floor must be > 0");
  const double peak = density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());
  const double cut = relative_floor * peak;
  Mask valid(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) valid[i] = peak > 0.0 && density[i] >= cut;
  return valid;
}

double excluded_mass(std::span<const double> density, const Mask& valid, const Grid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (!valid[i]) s += density[i];
  }
  return s * grid.dx();
}

MadelungField decompose(const WaveField& psi, double relative_floor) {
  const std::size_t n = psi.size();
  std::vector<double> rho = psi.density();
  Mask reliable = density_mask(rho, relative_floor);
  const auto anchor_it = std::find(reliable.begin(), reliable.end(), true);
  if (anchor_it == reliable.end()) throw DegenerateStateError("decompose: all-zero field");
  const auto anchor = static_cast<std::size_t>(anchor_it - reliable.begin());

  std::vector<double> phase(n);
  phase[anchor] = std::arg(psi[anchor]);
  for (std::size_t i = anchor + 1; i < n; ++i) {
    phase[i] = phase[i - 1] + std::remainder(std::arg(psi[i]) - phase[i - 1], 2.0 * std::numbers::pi);
  }
  for (std::size_t i = anchor; i-- > 0;) {
    phase[i] = phase[i + 1] + std::remainder(std::arg(psi[i]) - phase[i + 1], 2.0 * std::numbers::pi);
  }
  return {psi.grid(), std::move(rho), std::move(phase), std::move(reliable)};
}

WaveField compose(const MadelungField& m) {
  std::vector<cplx> v(m.grid().size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::polar(std::sqrt(m.density()[i]), m.phase()[i]);
  }
  return {m.grid(), std::move(v)};
}

MaskedField phase_gradient(const WaveField& psi, double relative_floor) {
  const std::vector<double> rho = psi.density();
  const std::vector<cplx> grad = spectral_gradient(psi.values(), psi.grid());
  MaskedField out{std::vector<double>(psi.size(), 0.0), density_mask(rho, relative_floor)};
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (out.valid[i]) out.values[i] = (std::conj(psi[i]) * grad[i]).imag() / rho[i];
  }
  return out;
}

}  // namespace wavelab
