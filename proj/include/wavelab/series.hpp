#pragma once

// Columnar plain-text output. Every file starts with one '#' header line
// naming the columns and their units; numbers are written with 17
// significant digits so identical runs give identical bytes.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "wavelab/potential.hpp"
#include "wavelab/propagators.hpp"
#include "wavelab/scenario.hpp"
#include "wavelab/verify.hpp"

namespace wavelab {

struct SeriesSelection {
  OutputSelection quantities;
  // Snapshot indices to write. Empty means header-only files.
  std::vector<std::size_t> snapshots;

  static SeriesSelection all(const EvolutionResult& result, OutputSelection quantities);
};

// "%.16e"
std::string format_number(double v);

// Writes density.dat, phase.dat, local_fields.dat, observables.dat and
// residuals.dat (whichever are selected) into `dir`, creating it. Returns the
// paths written, in that order. Throws IoError when a file cannot be written.
std::vector<std::filesystem::path> emit_series(const EvolutionResult& result, const PotentialSpec& potential,
                                               const SeriesSelection& selection, const std::filesystem::path& dir);

// Density at the selected snapshots as a standalone SVG line plot.
void write_density_svg(const EvolutionResult& result, const SeriesSelection& selection,
                       const std::filesystem::path& file);

}  // namespace wavelab
