#include "deconv/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace deconv::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return std::string(trim(hash == std::string::npos ? line : line.substr(0, hash)));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::vector<std::string> split_csv(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.emplace_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::int64_t parse_index(const std::string& tok, std::size_t line) {
  std::int64_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(line, "expected an integer, got '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ParseError(line, "expected a finite number, got '" + tok + "'");
  return v;
}

Scalar parse_weight(const std::string& tok, Arithmetic mode, std::size_t line) {
  try {
    return Scalar::parse(tok, mode);
  } catch (const ParseError&) {
    throw ParseError(line, "malformed weight '" + tok + "'");
  } catch (const PreconditionError&) {
    throw ParseError(line, "malformed weight '" + tok + "'");
  }
}

void write_header(std::ostream& out, const Header& header) {
  for (const auto& h : header) out << "# " << h << '\n';
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::filesystem::path sidecar(const std::filesystem::path& path, const char* suffix) {
  return std::filesystem::path(path.string() + suffix);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Measures

AtomicMeasure parse_measure(std::istream& in, Arithmetic mode) {
  std::vector<Atom> atoms;
  int dim = 0;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto toks = split_ws(strip_comment(line));
    if (toks.empty()) continue;
    if (toks.size() != 2 && toks.size() != 3)
      throw ParseError(line_no, "expected '<i> <w>' or '<i> <j> <w>'");
    const int d = static_cast<int>(toks.size()) - 1;
    if (dim == 0) dim = d;
    if (d != dim)
      throw ParseError(line_no, "atom has dimension " + std::to_string(d) + ", earlier atoms have " +
                                    std::to_string(dim));
    const LatticePoint p = d == 1 ? LatticePoint(parse_index(toks[0], line_no))
                                  : LatticePoint(parse_index(toks[0], line_no), parse_index(toks[1], line_no));
    atoms.emplace_back(p, parse_weight(toks.back(), mode, line_no));
  }
  return AtomicMeasure(dim == 0 ? 1 : dim, mode, atoms);
}

AtomicMeasure read_measure(const std::filesystem::path& path, Arithmetic mode) {
  auto in = open_in(path);
  return parse_measure(in, mode);
}

void format_measure(std::ostream& out, const AtomicMeasure& m, const Header& header) {
  write_header(out, header);
  for (const auto& [p, w] : m.atoms()) {
    out << p[0];
    if (m.dimension() == 2) out << ' ' << p[1];
    out << ' ' << w.str() << '\n';
  }
}

void write_measure(const std::filesystem::path& path, const AtomicMeasure& m, const Header& header) {
  auto out = open_out(path);
  format_measure(out, m, header);
}

// ---------------------------------------------------------------------------
// CSV

LatticeSignal parse_lattice_csv(std::istream& in, Arithmetic mode) {
  std::vector<std::pair<std::int64_t, Scalar>> rows;
  std::size_t line_no = 0;
  bool seen_header = false;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split_csv(body);
    if (!seen_header && rows.empty() && cells.size() == 2 && cells[0] == "index") {
      seen_header = true;
      continue;
    }
    if (cells.size() != 2) throw ParseError(line_no, "expected 'index,value'");
    rows.emplace_back(parse_index(cells[0], line_no), parse_weight(cells[1], mode, line_no));
  }
  if (rows.empty()) throw ParseError(line_no, "signal has no samples");
  std::int64_t lo = rows.front().first;
  std::int64_t hi = lo;
  for (const auto& [i, v] : rows) {
    lo = std::min(lo, i);
    hi = std::max(hi, i);
  }
  std::vector<Scalar> values(static_cast<std::size_t>(hi - lo + 1), Scalar::zero(mode));
  std::vector<bool> seen(values.size(), false);
  for (const auto& [i, v] : rows) {
    const auto k = static_cast<std::size_t>(i - lo);
    if (seen[k]) throw ParseError(line_no, "index " + std::to_string(i) + " appears twice");
    seen[k] = true;
    values[k] = v;
  }
  return LatticeSignal(WindowSpec::interval(lo, hi), std::move(values));
}

void format_lattice_csv(std::ostream& out, const LatticeSignal& s, const Header& header) {
  if (s.dimension() != 1) throw DimensionMismatch("CSV lattice signals are 1D");
  write_header(out, header);
  out << "index,value\n";
  const auto& ax = s.extent().axis(0);
  for (std::int64_t i = ax.lo; i <= ax.hi; ++i)
    out << i << ',' << s.values()[static_cast<std::size_t>(i - ax.lo)].str() << '\n';
}

GridSignal parse_grid_csv(std::istream& in) {
  std::vector<double> xs;
  std::vector<double> vs;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split_csv(body);
    if (xs.empty() && cells.size() == 2 && cells[0] == "x") continue;
    if (cells.size() != 2) throw ParseError(line_no, "expected 'x,value'");
    xs.push_back(parse_double(cells[0], line_no));
    vs.push_back(parse_double(cells[1], line_no));
  }
  if (xs.size() < 2) throw ParseError(line_no, "grid signal needs at least 2 samples");
  const double spacing = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(spacing > 0.0)) throw ParseError(line_no, "x values must increase");
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (std::abs(xs[k] - (xs.front() + static_cast<double>(k) * spacing)) > 1e-6 * spacing)
      throw ParseError(k + 1, "x values are not uniformly spaced");
  return GridSignal(GridShape::line(xs.size(), spacing, xs.front()), std::move(vs));
}

void format_grid_csv(std::ostream& out, const GridSignal& s, const Header& header) {
  if (s.dimension() != 1) throw DimensionMismatch("CSV grid signals are 1D");
  write_header(out, header);
  out << "x,value\n";
  const auto& ax = s.shape().axis(0);
  for (std::size_t i = 0; i < ax.count; ++i)
    out << format_double(ax.coordinate(i)) << ',' << format_double(s[i]) << '\n';
}

std::string csv_kind(const std::filesystem::path& path) {
  auto in = open_in(path);
  for (std::string line; std::getline(in, line);) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split_csv(body);
    if (cells.size() == 2 && (cells[0] == "index" || cells[0] == "x")) return std::string(body);
    return {};
  }
  return {};
}

// ---------------------------------------------------------------------------
// PGM

namespace {

/// Reads the next whitespace-separated header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

std::size_t pgm_number(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  std::size_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (tok.empty() || ec != std::errc() || ptr != end)
    throw ParseError(0, std::string("PGM ") + what + " is not a non-negative integer: '" + tok + "'");
  return v;
}

void read_pgm_sidecar(const std::filesystem::path& path, PgmImage& img) {
  const auto hdr = sidecar(path, ".hdr");
  if (!std::filesystem::exists(hdr)) return;
  auto in = open_in(hdr);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto toks = split_ws(strip_comment(line));
    if (toks.empty()) continue;
    if (toks.size() != 3 || (toks[0] != "spacing" && toks[0] != "origin"))
      throw ParseError(line_no, "expected 'spacing <dy> <dx>' or 'origin <y0> <x0>' in " + hdr.string());
    double* dst = toks[0] == "spacing" ? img.spacing : img.origin;
    dst[0] = parse_double(toks[1], line_no);
    dst[1] = parse_double(toks[2], line_no);
  }
  if (!(img.spacing[0] > 0.0 && img.spacing[1] > 0.0))
    throw ParseError(line_no, "PGM spacing must be positive");
}

}  // namespace

PgmImage read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw ParseError(1, "not a PGM file (magic '" + magic + "')");
  PgmImage img;
  img.cols = pgm_number(in, "width");
  img.rows = pgm_number(in, "height");
  const std::size_t maxval = pgm_number(in, "maxval");
  if (img.rows == 0 || img.cols == 0) throw ParseError(0, "PGM image is empty");
  if (maxval == 0 || maxval > 65535) throw ParseError(0, "PGM maxval must be in [1, 65535]");
  img.maxval = static_cast<unsigned>(maxval);
  img.pixels.resize(img.rows * img.cols);
  if (magic == "P2") {
    for (auto& px : img.pixels) {
      const std::size_t v = pgm_number(in, "sample");
      if (v > maxval) throw ParseError(0, "PGM sample exceeds maxval");
      px = static_cast<std::uint16_t>(v);
    }
  } else {
    const std::size_t width = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(img.pixels.size() * width);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw ParseError(0, "PGM raster is truncated");
    for (std::size_t k = 0; k < img.pixels.size(); ++k) {
      const unsigned v = width == 2 ? (unsigned{raw[2 * k]} << 8) | raw[2 * k + 1] : raw[k];
      if (v > maxval) throw ParseError(0, "PGM sample exceeds maxval");
      img.pixels[k] = static_cast<std::uint16_t>(v);
    }
  }
  read_pgm_sidecar(path, img);
  return img;
}

void write_pgm(const std::filesystem::path& path, const PgmImage& image, bool binary, const Header& header) {
  if (image.pixels.size() != image.rows * image.cols) throw InvalidArgument("PGM pixel count mismatch");
  if (image.maxval == 0 || image.maxval > 65535) throw InvalidArgument("PGM maxval must be in [1, 65535]");
  {
    auto out = open_out(path, true);
    out << (binary ? "P5" : "P2") << '\n';
    write_header(out, header);
    out << image.cols << ' ' << image.rows << '\n' << image.maxval << '\n';
    if (binary) {
      for (const auto px : image.pixels) {
        if (image.maxval > 255) out.put(static_cast<char>(px >> 8));
        out.put(static_cast<char>(px & 0xff));
      }
    } else {
      for (std::size_t r = 0; r < image.rows; ++r) {
        for (std::size_t c = 0; c < image.cols; ++c)
          out << (c ? " " : "") << image.pixels[r * image.cols + c];
        out << '\n';
      }
    }
  }
  auto hdr = open_out(sidecar(path, ".hdr"));
  write_header(hdr, header);
  hdr << "spacing " << format_double(image.spacing[0]) << ' ' << format_double(image.spacing[1]) << '\n';
  hdr << "origin " << format_double(image.origin[0]) << ' ' << format_double(image.origin[1]) << '\n';
}

LatticeSignal pgm_to_lattice(const PgmImage& image, Arithmetic mode) {
  std::int64_t origin[2];
  for (int a = 0; a < 2; ++a) {
    if (image.origin[a] != std::round(image.origin[a]))
      throw InvalidArgument("lattice images need an integral origin");
    origin[a] = static_cast<std::int64_t>(image.origin[a]);
  }
  std::vector<Scalar> values;
  values.reserve(image.pixels.size());
  for (const auto px : image.pixels) values.push_back(Scalar::integer(mode, px));
  const auto rows = static_cast<std::int64_t>(image.rows);
  const auto cols = static_cast<std::int64_t>(image.cols);
  return LatticeSignal(WindowSpec::box({origin[0], origin[0] + rows - 1}, {origin[1], origin[1] + cols - 1}),
                       std::move(values));
}

GridSignal pgm_to_grid(const PgmImage& image) {
  std::vector<double> samples;
  samples.reserve(image.pixels.size());
  for (const auto px : image.pixels) samples.push_back(static_cast<double>(px) / image.maxval);
  return GridSignal(GridShape({GridAxis{image.rows, image.spacing[0], image.origin[0]},
                               GridAxis{image.cols, image.spacing[1], image.origin[1]}}),
                    std::move(samples));
}

namespace {

std::uint16_t quantize(double v, unsigned maxval) {
  return static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, static_cast<double>(maxval)));
}

}  // namespace

PgmImage lattice_to_pgm(const LatticeSignal& s, unsigned maxval) {
  if (s.dimension() != 2) throw DimensionMismatch("PGM images are 2D");
  PgmImage img;
  img.rows = static_cast<std::size_t>(s.extent().axis(0).length());
  img.cols = static_cast<std::size_t>(s.extent().axis(1).length());
  img.maxval = maxval;
  img.origin[0] = static_cast<double>(s.extent().axis(0).lo);
  img.origin[1] = static_cast<double>(s.extent().axis(1).lo);
  for (const auto& v : s.values()) img.pixels.push_back(quantize(v.to_double(), maxval));
  return img;
}

PgmImage grid_to_pgm(const GridSignal& s, unsigned maxval) {
  if (s.dimension() != 2) throw DimensionMismatch("PGM images are 2D");
  PgmImage img;
  img.rows = s.shape().axis(0).count;
  img.cols = s.shape().axis(1).count;
  img.maxval = maxval;
  for (int a = 0; a < 2; ++a) {
    img.spacing[a] = s.shape().axis(a).spacing;
    img.origin[a] = s.shape().axis(a).origin;
  }
  for (const double v : s.samples()) img.pixels.push_back(quantize(v * maxval, maxval));
  return img;
}

// ---------------------------------------------------------------------------
// Raw float64 grids

GridSignal read_raw_grid(const std::filesystem::path& path) {
  auto desc = open_in(sidecar(path, ".desc"));
  std::vector<std::size_t> count;
  std::vector<double> spacing;
  std::vector<double> origin;
  int dim = 0;
  std::size_t line_no = 0;
  for (std::string line; std::getline(desc, line);) {
    ++line_no;
    const auto toks = split_ws(strip_comment(line));
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "dimension" && toks.size() == 2) {
      dim = static_cast<int>(parse_index(toks[1], line_no));
    } else if (key == "dtype" && toks.size() == 2) {
      if (toks[1] != "float64-le") throw ParseError(line_no, "unsupported dtype '" + toks[1] + "'");
    } else if (key == "count") {
      for (std::size_t k = 1; k < toks.size(); ++k)
        count.push_back(static_cast<std::size_t>(parse_index(toks[k], line_no)));
    } else if (key == "spacing") {
      for (std::size_t k = 1; k < toks.size(); ++k) spacing.push_back(parse_double(toks[k], line_no));
    } else if (key == "origin") {
      for (std::size_t k = 1; k < toks.size(); ++k) origin.push_back(parse_double(toks[k], line_no));
    } else {
      throw ParseError(line_no, "unknown descriptor entry '" + key + "'");
    }
  }
  const auto d = static_cast<std::size_t>(dim);
  if (dim < 1 || dim > 2 || count.size() != d || spacing.size() != d || origin.size() != d)
    throw ParseError(line_no, "descriptor needs dimension, count, spacing and origin for every axis");
  std::vector<GridAxis> axes;
  for (std::size_t a = 0; a < d; ++a) axes.push_back({count[a], spacing[a], origin[a]});
  GridShape shape(std::move(axes));

  auto in = open_in(path, true);
  std::vector<unsigned char> raw(shape.size() * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size() || in.peek() != EOF)
    throw ParseError(0, "raw grid size does not match its descriptor");
  std::vector<double> samples(shape.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | raw[8 * k + static_cast<std::size_t>(b)];
    samples[k] = std::bit_cast<double>(bits);
  }
  return GridSignal(std::move(shape), std::move(samples));
}

void write_raw_grid(const std::filesystem::path& path, const GridSignal& s, const Header& header) {
  {
    auto out = open_out(path, true);
    for (const double v : s.samples()) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b, bits >>= 8) out.put(static_cast<char>(bits & 0xff));
    }
  }
  auto desc = open_out(sidecar(path, ".desc"));
  write_header(desc, header);
  desc << "dimension " << s.dimension() << "\ncount";
  for (const auto& ax : s.shape().axes()) desc << ' ' << ax.count;
  desc << "\nspacing";
  for (const auto& ax : s.shape().axes()) desc << ' ' << format_double(ax.spacing);
  desc << "\norigin";
  for (const auto& ax : s.shape().axes()) desc << ' ' << format_double(ax.origin);
  desc << "\ndtype float64-le\n";
}

std::string slurp(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace deconv::io
