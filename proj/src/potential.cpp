#include "wavelab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavelab/error.hpp"

namespace wavelab {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

}  // namespace

std::string_view to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::constant: return "constant";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::quartic: return "quartic";
    case PotentialKind::barrier: return "barrier";
    case PotentialKind::well: return "well";
    case PotentialKind::custom_tabulated: return "custom_tabulated";
    case PotentialKind::time_ramped: return "time_ramped";
  }
  return "unknown";
}

PotentialSpec PotentialSpec::zero() { return {}; }

PotentialSpec PotentialSpec::constant(double value) {
  require_finite(value, "constant potential");
  PotentialSpec p;
  p.kind_ = PotentialKind::constant;
  p.strength_ = value;
  return p;
}

PotentialSpec PotentialSpec::harmonic(double omega0, std::optional<double> center) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ConfigError("harmonic omega0 must be > 0");
  PotentialSpec p;
  p.kind_ = PotentialKind::harmonic;
  p.strength_ = omega0;
  p.center_ = center;
  return p;
}

PotentialSpec PotentialSpec::quartic(double coefficient, std::optional<double> center) {
  if (!(coefficient >= 0.0) || !std::isfinite(coefficient)) {
    throw ConfigError("quartic coefficient must be >= 0");
  }
  PotentialSpec p;
  p.kind_ = PotentialKind::quartic;
  p.strength_ = coefficient;
  p.center_ = center;
  return p;
}

PotentialSpec PotentialSpec::barrier(double height, double x_a, double x_b) {
  require_finite(height, "barrier height");
  if (height < 0.0) throw ConfigError("barrier height must be >= 0 (use well for negative)");
  if (!(x_a < x_b)) throw ConfigError("barrier edges must satisfy x_a < x_b");
  PotentialSpec p;
  p.kind_ = PotentialKind::barrier;
  p.strength_ = height;
  p.x_a_ = x_a;
  p.x_b_ = x_b;
  return p;
}

PotentialSpec PotentialSpec::well(double depth, double x_a, double x_b) {
  require_finite(depth, "well depth");
  if (depth < 0.0) throw ConfigError("well depth must be >= 0");
  if (!(x_a < x_b)) throw ConfigError("well edges must satisfy x_a < x_b");
  PotentialSpec p;
  p.kind_ = PotentialKind::well;
  p.strength_ = depth;
  p.x_a_ = x_a;
  p.x_b_ = x_b;
  return p;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> nodes, std::vector<double> values,
                                       double period) {
  if (nodes.size() != values.size() || nodes.empty()) {
    throw ConfigError("tabulated potential needs matching, non-empty node and value lists");
  }
  if (!(period > 0.0)) throw ConfigError("tabulated potential period must be > 0");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require_finite(nodes[i], "tabulated node");
    require_finite(values[i], "tabulated value");
    if (nodes[i] < 0.0 || nodes[i] >= period) {
      throw ConfigError("tabulated nodes must lie in [0, period)");
    }
    if (i > 0 && !(nodes[i] > nodes[i - 1])) {
      throw ConfigError("tabulated nodes must be strictly increasing");
    }
  }
  PotentialSpec p;
  p.kind_ = PotentialKind::custom_tabulated;
  p.nodes_ = std::move(nodes);
  p.values_ = std::move(values);
  p.period_ = period;
  return p;
}

PotentialSpec PotentialSpec::time_ramped(PotentialSpec inner, double rate) {
  require_finite(rate, "ramp rate");
  PotentialSpec p;
  p.kind_ = PotentialKind::time_ramped;
  p.rate_ = rate;
  p.inner_ = std::make_shared<const PotentialSpec>(std::move(inner));
  return p;
}

bool PotentialSpec::is_time_dependent() const noexcept {
  return kind_ == PotentialKind::time_ramped && rate_ != 0.0;
}

void PotentialSpec::validate(const Grid& grid) const {
  const double L = grid.length();
  switch (kind_) {
    case PotentialKind::barrier:
    case PotentialKind::well:
      if (!(0.0 < x_a_ && x_a_ < x_b_ && x_b_ < L)) {
        throw ConfigError(std::string(to_string(kind_)) + " edges must satisfy 0 < x_a < x_b < L");
      }
      break;
    case PotentialKind::custom_tabulated:
      if (std::abs(period_ - L) > 1e-12 * L) {
        throw ConfigError("tabulated potential period must equal the grid length");
      }
      break;
    case PotentialKind::time_ramped: inner_->validate(grid); break;
    default: break;
  }
}

double PotentialSpec::value(double t, double x, const Grid& grid) const {
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::constant: return strength_;
    case PotentialKind::harmonic: {
      const double d = x - center(grid);
      return 0.5 * grid.mass() * strength_ * strength_ * d * d;
    }
    case PotentialKind::quartic: {
      const double d = x - center(grid);
      return strength_ * (d * d) * (d * d);
    }
    case PotentialKind::barrier: return (x >= x_a_ && x <= x_b_) ? strength_ : 0.0;
    case PotentialKind::well: return (x >= x_a_ && x <= x_b_) ? -strength_ : 0.0;
    case PotentialKind::custom_tabulated: {
      double u = std::fmod(x, period_);
      if (u < 0.0) u += period_;
      const auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), u);
      double x0, x1, v0, v1;
      if (hi == nodes_.begin() || hi == nodes_.end()) {
        // Segment wrapping through the period boundary.
        x0 = nodes_.back();
        v0 = values_.back();
        x1 = nodes_.front() + period_;
        v1 = values_.front();
        if (u < x0) u += period_;
      } else {
        const auto j = static_cast<std::size_t>(hi - nodes_.begin());
        x0 = nodes_[j - 1];
        x1 = nodes_[j];
        v0 = values_[j - 1];
        v1 = values_[j];
      }
      if (x1 == x0) return v0;
      return v0 + (v1 - v0) * (u - x0) / (x1 - x0);
    }
    case PotentialKind::time_ramped: return (1.0 + rate_ * t) * inner_->value(t, x, grid);
  }
  return 0.0;
}

double PotentialSpec::gradient(double t, double x, const Grid& grid) const {
  switch (kind_) {
    case PotentialKind::harmonic:
      return grid.mass() * strength_ * strength_ * (x - center(grid));
    case PotentialKind::quartic: {
      const double d = x - center(grid);
      return 4.0 * strength_ * d * d * d;
    }
    case PotentialKind::custom_tabulated: {
      const double h = 1e-6 * period_;
      return (value(t, x + h, grid) - value(t, x - h, grid)) / (2.0 * h);
    }
    case PotentialKind::time_ramped: return (1.0 + rate_ * t) * inner_->gradient(t, x, grid);
    default: return 0.0;
  }
}

std::vector<double> PotentialSpec::sample(const Grid& grid, double t) const {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(t, grid.x(i), grid);
  return v;
}

}  // namespace wavelab
