#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "deconv/errors.hpp"
#include "deconv/grid.hpp"
#include "deconv/measure.hpp"

namespace deconv::io {

class IoError : public Error {
 public:
  using Error::Error;
};

/// Leading "# ..." lines written before the payload of every output file.
using Header = std::vector<std::string>;

// Measure text format: one atom per line, "<i> <w>" (d = 1) or
// "<i> <j> <w>" (d = 2). Weights are decimal or p/q literals. '#' starts a
// comment. Repeated points accumulate.
AtomicMeasure parse_measure(std::istream& in, Arithmetic mode);
AtomicMeasure read_measure(const std::filesystem::path& path, Arithmetic mode);
void format_measure(std::ostream& out, const AtomicMeasure& m, const Header& header = {});
void write_measure(const std::filesystem::path& path, const AtomicMeasure& m, const Header& header = {});

// Lattice signal CSV: "index,value" rows (1D only).
LatticeSignal parse_lattice_csv(std::istream& in, Arithmetic mode);
void format_lattice_csv(std::ostream& out, const LatticeSignal& s, const Header& header = {});

// Grid signal CSV: "x,value" rows on a uniform grid (1D only).
GridSignal parse_grid_csv(std::istream& in);
void format_grid_csv(std::ostream& out, const GridSignal& s, const Header& header = {});

/// Reads the first non-comment line of a CSV file ("index,value" or
/// "x,value"), or an empty string if the file has no header row.
std::string csv_kind(const std::filesystem::path& path);

/// PGM image with an optional sidecar "<path>.hdr" holding
/// "spacing <dy> <dx>" and "origin <y0> <x0>" lines. Rows run along axis 0.
struct PgmImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  unsigned maxval = 255;
  std::vector<std::uint16_t> pixels;  // row-major
  double spacing[2] = {1.0, 1.0};
  double origin[2] = {0.0, 0.0};
};

PgmImage read_pgm(const std::filesystem::path& path);
/// Writes P5 (binary) or P2 (ASCII) plus the sidecar header.
void write_pgm(const std::filesystem::path& path, const PgmImage& image, bool binary = true,
               const Header& header = {});

/// Pixel values as a lattice signal; origin must be integral.
LatticeSignal pgm_to_lattice(const PgmImage& image, Arithmetic mode);
GridSignal pgm_to_grid(const PgmImage& image);
/// Values are rounded and clamped to [0, maxval].
PgmImage lattice_to_pgm(const LatticeSignal& s, unsigned maxval = 255);
PgmImage grid_to_pgm(const GridSignal& s, unsigned maxval = 255);

/// Little-endian float64 samples with a text descriptor "<path>.desc".
GridSignal read_raw_grid(const std::filesystem::path& path);
void write_raw_grid(const std::filesystem::path& path, const GridSignal& s, const Header& header = {});

/// Shortest decimal that reads back as x.
std::string format_double(double x);

/// Whole file as bytes; used by tests and by reproducibility checks.
std::string slurp(const std::filesystem::path& path);

}  // namespace deconv::io
