#include "wavelab/series.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wavelab/error.hpp"
#include "wavelab/observables.hpp"

namespace wavelab {
namespace {

class Table {
 public:
  explicit Table(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot write '" + path.string() + "'");
  }
  void header(std::initializer_list<const char*> columns) {
    out_ << '#';
    for (const char* c : columns) out_ << ' ' << c;
    out_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) out_ << ' ';
      out_ << format_number(v);
      first = false;
    }
    out_ << '\n';
  }
  void close() {
    out_.close();
    if (!out_) throw IoError("failed writing '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace

SeriesSelection SeriesSelection::all(const EvolutionResult& result, OutputSelection quantities) {
  SeriesSelection s{quantities, {}};
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) s.snapshots.push_back(i);
  return s;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<std::filesystem::path> emit_series(const EvolutionResult& result, const PotentialSpec& potential,
                                               const SeriesSelection& selection, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  for (std::size_t s : selection.snapshots) {
    if (s >= result.snapshots.size()) throw StructuralError("series selection names a missing snapshot");
  }

  std::vector<std::filesystem::path> written;
  const OutputSelection& q = selection.quantities;

  if (q.density) {
    Table t(dir / "density.dat");
    t.header({"t[time]", "x[length]", "rho[1/length]"});
    for (std::size_t s : selection.snapshots) {
      const WaveField& psi = result.snapshots[s];
      const std::vector<double> rho = psi.density();
      for (std::size_t i = 0; i < rho.size(); ++i) t.row({result.times[s], psi.grid().x(i), rho[i]});
    }
    t.close();
    written.push_back(dir / "density.dat");
  }

  if (q.phase) {
    Table t(dir / "phase.dat");
    t.header({"t[time]", "x[length]", "S[rad]", "reliable[1]"});
    for (std::size_t s : selection.snapshots) {
      const WaveField& psi = result.snapshots[s];
      const MadelungField m = decompose(psi);
      for (std::size_t i = 0; i < psi.size(); ++i) {
        t.row({result.times[s], psi.grid().x(i), m.phase()[i], m.reliable()[i] ? 1.0 : 0.0});
      }
    }
    t.close();
    written.push_back(dir / "phase.dat");
  }

  if (q.local_fields) {
    Table t(dir / "local_fields.dat");
    t.header({"t[time]", "x[length]", "rho[1/length]", "p[momentum]", "Q[energy]", "kinetic[energy]",
              "E[energy]", "j[1/time]", "valid[1]"});
    for (std::size_t s : selection.snapshots) {
      const WaveField& psi = result.snapshots[s];
      const LocalFields f = local_fields(psi, potential, result.times[s]);
      for (std::size_t i = 0; i < psi.size(); ++i) {
        t.row({result.times[s], psi.grid().x(i), f.density[i], f.momentum[i], f.quantum_potential[i], f.kinetic[i],
               f.total_energy[i], f.current_flux[i], f.valid_mask[i] ? 1.0 : 0.0});
      }
    }
    t.close();
    written.push_back(dir / "local_fields.dat");
  }

  if (q.observables) {
    Table t(dir / "observables.dat");
    t.header({"t[time]", "norm[1]", "x_mean[length]", "p_mean[momentum]", "E_kin[energy]", "E[energy]",
              "Q_mean[energy]"});
    for (std::size_t s : selection.snapshots) {
      const WaveField& psi = result.snapshots[s];
      const double tm = result.times[s];
      t.row({tm, psi.norm_squared(), mean_position(psi), mean_momentum(psi, MomentumMethod::fourier_sum).value,
             mean_kinetic(psi, KineticMethod::fourier_sum).value,
             mean_total_energy(psi, potential, tm, EnergyMethod::hamiltonian).value,
             mean_quantum_potential(psi).value});
    }
    t.close();
    written.push_back(dir / "observables.dat");
  }

  if (q.residuals) {
    EvolutionResult picked;
    for (std::size_t s : selection.snapshots) {
      picked.snapshots.push_back(result.snapshots[s]);
      picked.times.push_back(result.times[s]);
    }
    const ResidualSeries r = residuals(picked, potential);
    Table t(dir / "residuals.dat");
    t.header({"t[time]", "continuity[1/(length^0.5 time)]", "qhj[energy]", "excluded_mass[1]"});
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      t.row({r.times[i], r.continuity_residual[i], r.qhj_residual[i], r.mask_fraction[i]});
    }
    t.close();
    written.push_back(dir / "residuals.dat");
  }
  return written;
}

void write_density_svg(const EvolutionResult& result, const SeriesSelection& selection,
                       const std::filesystem::path& file) {
  constexpr double width = 640.0, height = 400.0, margin = 40.0;
  double peak = 0.0;
  for (std::size_t s : selection.snapshots) {
    const std::vector<double> rho = result.snapshots[s].density();
    peak = std::max(peak, *std::max_element(rho.begin(), rho.end()));
  }
  if (!(peak > 0.0)) peak = 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::size_t count = selection.snapshots.size();
  for (std::size_t c = 0; c < count; ++c) {
    const WaveField& psi = result.snapshots[selection.snapshots[c]];
    const std::vector<double> rho = psi.density();
    const double shade = count > 1 ? 200.0 * static_cast<double>(c) / static_cast<double>(count - 1) : 0.0;
    svg << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"rgb(" << static_cast<int>(shade) << ",0,"
        << static_cast<int>(200 - shade) << ")\" points=\"";
    for (std::size_t i = 0; i < rho.size(); ++i) {
      char buf[64];
      const double px = margin + (width - 2 * margin) * psi.grid().x(i) / psi.grid().length();
      const double py = height - margin - (height - 2 * margin) * rho[i] / peak;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
      svg << buf;
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << svg.str();
  if (!out) throw IoError("failed writing '" + file.string() + "'");
}

}  // namespace wavelab
