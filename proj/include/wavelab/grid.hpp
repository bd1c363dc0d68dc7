#pragma once

// Uniform periodic 1-D lattice, wave fields on it, and the spectral machinery
// (transforms, derivatives, amplitude/phase split) everything else builds on.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace wavelab {

using cplx = std::complex<double>;
using Mask = std::vector<bool>;

// Phase-dependent quantities are only evaluated where density exceeds this
// fraction of the maximum density.
inline constexpr double kDefaultDensityFloor = 1e-12;

// Periodic lattice x_i = i * dx on [0, L) plus the physical constants hbar, M.
// Wavenumbers are stored in FFT order and cover 2 pi j / L for j in [-n/2, n/2).
class Grid {
 public:
  Grid(std::size_t n_points, double length, double hbar = 1.0, double mass = 1.0);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return dx_; }
  double hbar() const noexcept { return hbar_; }
  double mass() const noexcept { return mass_; }

  double x(std::size_t i) const noexcept { return tables_->x[i]; }
  double k(std::size_t j) const noexcept { return tables_->k[j]; }
  double k_fundamental() const noexcept;
  // Largest representable |k|, pi / dx.
  double k_max() const noexcept;

  std::span<const double> positions() const noexcept { return tables_->x; }
  std::span<const double> wavenumbers() const noexcept { return tables_->k; }
  // k_j / n and -k_j^2 / n: spectral multipliers with the inverse-DFT scale folded in.
  std::span<const double> gradient_multiplier() const noexcept { return tables_->grad; }
  std::span<const double> laplacian_multiplier() const noexcept { return tables_->lap; }

  // FFT-order index of an on-lattice wavenumber; throws ConfigError off-lattice.
  std::size_t index_of(double k) const;

  Grid with_hbar(double hbar) const { return Grid(n_, length_, hbar, mass_); }
  Grid with_points(std::size_t n) const { return Grid(n, length_, hbar_, mass_); }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_ && a.hbar_ == b.hbar_ && a.mass_ == b.mass_;
  }

 private:
  struct Tables {
    std::vector<double> x, k, grad, lap;
  };

  std::size_t n_;
  double length_;
  double dx_;
  double hbar_;
  double mass_;
  std::shared_ptr<const Tables> tables_;
};

// Samples of Psi at the grid nodes.
class WaveField {
 public:
  WaveField(Grid grid, std::vector<cplx> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }

  // sum |psi_i|^2 dx
  double norm_squared() const;
  std::vector<double> density() const;

  friend WaveField operator+(const WaveField& a, const WaveField& b);
  friend WaveField operator-(const WaveField& a, const WaveField& b);
  friend WaveField operator*(cplx c, const WaveField& a);

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

// Throws DegenerateStateError for an all-zero field.
WaveField normalize(const WaveField& psi);
// integral conj(a) b dx
cplx inner_product(const WaveField& a, const WaveField& b);
// sqrt(integral |a - b|^2 dx)
double l2_distance(const WaveField& a, const WaveField& b);

// Hydrodynamic view of a wave field: density rho = |Psi|^2 and phase S.
class MadelungField {
 public:
  // Throws StructuralError on length mismatch or negative density.
  MadelungField(Grid grid, std::vector<double> density, std::vector<double> phase,
                Mask reliable = {});

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> density() const noexcept { return density_; }
  std::span<const double> phase() const noexcept { return phase_; }
  // false where the density is below the floor and the phase carries no meaning.
  const Mask& reliable() const noexcept { return reliable_; }

 private:
  Grid grid_;
  std::vector<double> density_;
  std::vector<double> phase_;
  Mask reliable_;
};

// Pointwise field plus the points at which it is defined.
struct MaskedField {
  std::vector<double> values;  // 0 where !valid
  Mask valid;
};

// Fourier coefficients Psi_k in FFT order, scaled so sum |Psi_k|^2 = integral |Psi|^2 dx.
class MomentumAmplitudes {
 public:
  MomentumAmplitudes(Grid grid, std::vector<cplx> amplitudes);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const cplx& operator[](std::size_t j) const noexcept { return values_[j]; }
  double k(std::size_t j) const noexcept { return grid_.k(j); }
  // Amplitude of an on-lattice wavenumber.
  const cplx& at(double k) const { return values_[grid_.index_of(k)]; }

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

// sum f_i dx
double integrate(std::span<const double> f, const Grid& grid);
cplx integrate(std::span<const cplx> f, const Grid& grid);

MomentumAmplitudes to_momentum(const WaveField& psi);
WaveField from_momentum(const MomentumAmplitudes& amplitudes);

// Derivatives by multiplying Fourier coefficients with i k or -k^2. The real
// overloads return the real part, which drops the unpaired Nyquist mode.
std::vector<double> spectral_gradient(std::span<const double> f, const Grid& grid);
std::vector<cplx> spectral_gradient(std::span<const cplx> f, const Grid& grid);
std::vector<double> spectral_laplacian(std::span<const double> f, const Grid& grid);
std::vector<cplx> spectral_laplacian(std::span<const cplx> f, const Grid& grid);

// density_i >= relative_floor * max(density)
Mask density_mask(std::span<const double> density, double relative_floor);
// Probability mass at points outside the mask.
double excluded_mass(std::span<const double> density, const Mask& valid, const Grid& grid);

// Principal argument unwrapped left to right (jumps larger than pi folded by
// 2 pi), anchored at the leftmost reliable point. Throws DegenerateStateError
// for an all-zero field.
MadelungField decompose(const WaveField& psi, double relative_floor = kDefaultDensityFloor);
WaveField compose(const MadelungField& m);

// grad S = Im(conj(Psi) grad Psi) / |Psi|^2, no unwrapping involved.
MaskedField phase_gradient(const WaveField& psi, double relative_floor = kDefaultDensityFloor);

}  // namespace wavelab
