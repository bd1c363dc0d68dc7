#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

enum class PotentialKind {
  zero,
  constant,
  harmonic,        // 1/2 M omega0^2 (x - c)^2, c defaults to L/2
  quartic,         // coefficient * (x - c)^4, c defaults to L/2
  barrier,         // height on [x_a, x_b], 0 elsewhere
  well,            // -depth on [x_a, x_b], 0 elsewhere
  custom_tabulated,
  time_ramped,     // (1 + rate t) * inner(x)
};

std::string_view to_string(PotentialKind kind) noexcept;

// Symbolic V(t, x), sampleable on any grid at any time. Always real.
class PotentialSpec {
 public:
  PotentialSpec() = default;

  static PotentialSpec zero();
  static PotentialSpec constant(double value);
  static PotentialSpec harmonic(double omega0, std::optional<double> center = std::nullopt);
  static PotentialSpec quartic(double coefficient, std::optional<double> center = std::nullopt);
  static PotentialSpec barrier(double height, double x_a, double x_b);
  static PotentialSpec well(double depth, double x_a, double x_b);
  // Periodic piecewise-linear interpolation through (nodes[i], values[i]);
  // nodes strictly increasing inside [0, period).
  static PotentialSpec tabulated(std::vector<double> nodes, std::vector<double> values,
                                 double period);
  static PotentialSpec time_ramped(PotentialSpec inner, double rate);

  PotentialKind kind() const noexcept { return kind_; }
  // V0 for constant/barrier, depth for well, omega0 for harmonic, coefficient for quartic.
  double strength() const noexcept { return strength_; }
  double x_a() const noexcept { return x_a_; }
  double x_b() const noexcept { return x_b_; }
  double ramp_rate() const noexcept { return rate_; }
  const PotentialSpec* inner() const noexcept { return inner_.get(); }
  double center(const Grid& grid) const noexcept { return center_.value_or(0.5 * grid.length()); }
  bool is_time_dependent() const noexcept;

  // Throws ConfigError when the spec cannot live on this grid (edges outside
  // (0, L), tabulation not covering the period, ...).
  void validate(const Grid& grid) const;

  double value(double t, double x, const Grid& grid) const;
  // dV/dx, for the classical trajectory oracle.
  double gradient(double t, double x, const Grid& grid) const;
  std::vector<double> sample(const Grid& grid, double t) const;

 private:
  PotentialKind kind_ = PotentialKind::zero;
  double strength_ = 0.0;
  double x_a_ = 0.0;
  double x_b_ = 0.0;
  double rate_ = 0.0;
  double period_ = 0.0;
  std::optional<double> center_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::shared_ptr<const PotentialSpec> inner_;
};

}  // namespace wavelab
