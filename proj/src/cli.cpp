#include "deconv/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "deconv/gaussian.hpp"
#include "deconv/io.hpp"
#include "deconv/lateral.hpp"
#include "deconv/measure.hpp"
#include "deconv/neumann.hpp"

namespace deconv::cli {

namespace {

namespace fs = std::filesystem;
using io::format_double;
using io::Header;

/// Bad flag values that CLI11 cannot check on its own.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Config {
  std::string command;
  std::vector<std::string> inputs;
  std::string output;
  std::string metrics;
  std::string reference;
  std::string mode = "exact";
  std::string method;
  std::string kernel;
  std::string side = "right";
  std::string experiment;
  std::vector<std::int64_t> n;
  std::string tol;
  std::uint64_t seed = 1;
  std::string a = "0.75";
  std::vector<double> sigma;
  std::vector<double> band_limit;
  unsigned iterations = 10;
  std::string window;
  std::string eps = "1e-6";
  std::int64_t site = 0;
  std::optional<double> padding;
  bool observed = false;
  bool ascii = false;

  Arithmetic arithmetic() const { return parse_arithmetic(mode); }
};

std::string extension(const std::string& path) { return fs::path(path).extension().string(); }

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

template <class T, class F>
std::string join_map(const std::vector<T>& xs, F f) {
  std::vector<std::string> parts;
  for (const auto& x : xs) parts.push_back(f(x));
  return join(parts, ",");
}

std::int64_t single_n(const Config& cfg, std::int64_t fallback) {
  if (cfg.n.empty()) return fallback;
  if (cfg.n.size() != 1) throw UsageError("--N takes a single value for '" + cfg.command + "'");
  return cfg.n.front();
}

WindowSpec parse_window(const std::string& text, int dim) {
  const auto colon = text.find(':');
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument("no colon");
    std::size_t used = 0;
    lo = std::stoll(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(colon + 1);
    hi = std::stoll(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    throw UsageError("--window expects lo:hi with integers, got '" + text + "'");
  }
  if (lo > hi) throw UsageError("--window has lo > hi: '" + text + "'");
  if (dim == 1) return WindowSpec::interval(lo, hi);
  return WindowSpec::box({lo, hi}, {lo, hi});
}

// ---------------------------------------------------------------------------
// Headers

class HeaderBuilder {
 public:
  explicit HeaderBuilder(const Config& cfg) {
    lines_.push_back("deconv " + cfg.command + (cfg.experiment.empty() ? "" : " " + cfg.experiment));
    for (std::size_t i = 0; i < cfg.inputs.size(); ++i)
      add("input" + std::to_string(i + 1), cfg.inputs[i]);
  }
  HeaderBuilder& add(const std::string& key, const std::string& value) {
    lines_.push_back(key + "=" + value);
    return *this;
  }
  const Header& lines() const { return lines_; }

 private:
  Header lines_;
};

// ---------------------------------------------------------------------------
// Kernels and series

AtomicMeasure squared(const AtomicMeasure& k, int dim) {
  return dim == 1 ? k : deconv::tensor_product(k, k);
}

/// Named kernels are 1D; on 2D signals they act separably.
AtomicMeasure resolve_kernel(const Config& cfg, const std::string& name, int dim) {
  const Arithmetic mode = cfg.arithmetic();
  if (name == "binomial") return squared(lateral::binomial_kernel(mode), dim);
  if (name == "half-pair") return squared(lateral::half_pair_kernel(mode), dim);
  if (name == "forward-pair") return squared(lateral::forward_pair(mode), dim);
  if (name == "backward-pair") return squared(lateral::backward_pair(mode), dim);
  if (name == "three-point") return squared(neumann::three_point_kernel(Scalar::parse(cfg.a, mode)), dim);
  if (name == "gaussian") throw UsageError("the gaussian kernel applies to grid signals only");
  if (!fs::exists(name)) throw UsageError("unknown kernel '" + name + "' (not a name or a file)");
  AtomicMeasure k = io::read_measure(name, mode);
  if (k.dimension() != dim)
    throw DimensionMismatch("kernel file is " + std::to_string(k.dimension()) + "D, signal is " +
                            std::to_string(dim) + "D");
  return k;
}

lateral::Side parse_side(const std::string& s) {
  return s == "left" ? lateral::Side::Left : lateral::Side::Right;
}

lateral::TruncatedSeries series_1d(const std::string& method, const AtomicMeasure& k, std::int64_t n,
                                   lateral::Side side) {
  const Arithmetic mode = k.mode();
  if (method == "theorem2") {
    if (!(k == lateral::binomial_kernel(mode)))
      throw lateral::UnsupportedKernel("method theorem2 needs the binomial kernel 1/4, 1/2, 1/4");
    return lateral::binomial_inverse(n, mode);
  }
  if (method == "h") {
    if (!(k == lateral::half_pair_kernel(mode)))
      throw lateral::UnsupportedKernel("method h needs the kernel 1/2 (delta_0 + delta_1)");
    return lateral::half_pair_inverse(n, mode);
  }
  if (k == lateral::binomial_kernel(mode)) return lateral::one_sided_binomial_inverse(side, n, mode);
  return lateral::unit_pair_inverse(k, side, n);
}

/// Truncated inverse for the lateral-family methods; 2D kernels must be
/// tensor squares of a supported 1D kernel.
lateral::TruncatedSeries build_series(const std::string& method, const AtomicMeasure& kernel, std::int64_t n,
                                      lateral::Side side) {
  if (kernel.dimension() == 1) return series_1d(method, kernel, n, side);
  const Arithmetic mode = kernel.mode();
  for (const auto& k1 : {lateral::binomial_kernel(mode), lateral::half_pair_kernel(mode),
                         lateral::forward_pair(mode), lateral::backward_pair(mode)}) {
    if (deconv::tensor_product(k1, k1) == kernel) {
      const auto s = series_1d(method, k1, n, side);
      return lateral::tensor_product(s, s);
    }
  }
  throw lateral::UnsupportedKernel("2D kernel is not the tensor square of a supported 1D kernel");
}

// ---------------------------------------------------------------------------
// Signal IO

struct LoadedLattice {
  LatticeSignal signal;
  unsigned maxval = 255;
};

LoadedLattice load_lattice(const std::string& path, Arithmetic mode) {
  const std::string ext = extension(path);
  if (ext == ".pgm") {
    const auto img = io::read_pgm(path);
    return {io::pgm_to_lattice(img, mode), img.maxval};
  }
  if (ext == ".csv") {
    if (io::csv_kind(path).starts_with("x,"))
      throw ParseError(1, path + " holds a grid signal (x,value); this method needs index,value");
    std::ifstream in(path);
    if (!in) throw io::IoError("cannot open '" + path + "' for reading");
    return {io::parse_lattice_csv(in, mode)};
  }
  const AtomicMeasure m = io::read_measure(path, mode);
  const auto box = m.bounding_box();
  if (!box) throw ParseError(1, path + " holds no atoms");
  return {LatticeSignal::from_measure(m, *box)};
}

GridSignal load_grid(const std::string& path) {
  const std::string ext = extension(path);
  if (ext == ".pgm") return io::pgm_to_grid(io::read_pgm(path));
  if (ext == ".raw") return io::read_raw_grid(path);
  if (io::csv_kind(path).starts_with("index,"))
    throw ParseError(1, path + " holds a lattice signal (index,value); this method needs x,value");
  std::ifstream in(path);
  if (!in) throw io::IoError("cannot open '" + path + "' for reading");
  return io::parse_grid_csv(in);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::IoError("cannot open '" + path + "' for writing");
  return out;
}

void write_lattice(const Config& cfg, const LatticeSignal& s, const Header& header, unsigned maxval) {
  const std::string ext = extension(cfg.output);
  if (ext == ".csv") {
    auto out = open_output(cfg.output);
    io::format_lattice_csv(out, s, header);
  } else if (ext == ".pgm") {
    io::write_pgm(cfg.output, io::lattice_to_pgm(s, maxval), !cfg.ascii, header);
  } else {
    io::write_measure(cfg.output, s.to_measure(), header);
  }
}

void write_grid(const Config& cfg, const GridSignal& s, const Header& header) {
  const std::string ext = extension(cfg.output);
  if (ext == ".csv") {
    auto out = open_output(cfg.output);
    io::format_grid_csv(out, s, header);
  } else if (ext == ".pgm") {
    io::write_pgm(cfg.output, io::grid_to_pgm(s), !cfg.ascii, header);
  } else if (ext == ".raw") {
    io::write_raw_grid(cfg.output, s, header);
  } else {
    throw UsageError("grid output must end in .csv, .pgm or .raw: " + cfg.output);
  }
}

GridSignal add_noise(const GridSignal& g, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw InvalidArgument("noise sigma must be >= 0");
  if (sigma == 0.0) return g;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noisy = g.samples();
  for (double& v : noisy) v += sigma * normal(rng);
  return GridSignal(g.shape(), std::move(noisy));
}

// ---------------------------------------------------------------------------
// Metrics

struct Metrics {
  double max_err;
  double l2_err;
};

Metrics lattice_metrics(const LatticeSignal& got, const LatticeSignal& want) {
  const WindowSpec all = got.extent().hull(want.extent());
  const LatticeSignal a = got.resampled(all);
  const LatticeSignal b = want.resampled(all);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    const double d = (a.values()[k] - b.values()[k]).to_double();
    const double w = b.values()[k].to_double();
    num += d * d;
    den += w * w;
  }
  return {got.max_abs_difference(want).to_double(), den == 0.0 ? std::sqrt(num) : std::sqrt(num / den)};
}

void write_metrics(const Config& cfg, std::ostream& out, const Header& header, const std::string& params,
                   const std::optional<Metrics>& m) {
  std::ostringstream os;
  for (const auto& h : header) os << "# " << h << '\n';
  os << "method,params,max_err,l2_err\n";
  os << cfg.method << ',' << params << ',' << (m ? format_double(m->max_err) : "na") << ','
     << (m ? format_double(m->l2_err) : "na") << '\n';
  if (cfg.metrics.empty()) {
    out << os.str();
  } else {
    auto file = open_output(cfg.metrics);
    file << os.str();
  }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_convolve(const Config& cfg, std::ostream&) {
  const Arithmetic mode = cfg.arithmetic();
  const AtomicMeasure a = io::read_measure(cfg.inputs.at(0), mode);
  const AtomicMeasure b = io::read_measure(cfg.inputs.at(1), mode);
  HeaderBuilder h(cfg);
  h.add("mode", cfg.mode);
  io::write_measure(cfg.output, convolve(a, b), h.lines());
  return kOk;
}

int cmd_invert(const Config& cfg, std::ostream& out) {
  const Arithmetic mode = cfg.arithmetic();
  const AtomicMeasure kernel = io::read_measure(cfg.inputs.at(0), mode);
  const std::int64_t n = single_n(cfg, 10);
  if (n < 1) throw InvalidArgument("--N must be >= 1");

  AtomicMeasure inverse(kernel.dimension(), mode);
  Scalar residual_tv;
  std::string bound = "na";
  std::vector<std::string> boundary;
  if (cfg.method == "neumann") {
    const auto fac = neumann::factor_about_origin(kernel);
    const auto result =
        neumann::neumann_inverse(fac.mu, neumann::NeumannConfig::fixed_order(static_cast<unsigned>(n)));
    inverse = scale(result.inverse, Scalar::one(mode) / fac.center);
    residual_tv = result.report.residual_tv;
    bound = result.report.bound.str();
  } else {
    const auto series = build_series(cfg.method, kernel, n, parse_side(cfg.side));
    inverse = series.measure;
    residual_tv = total_variation(series.boundary_residual);
    for (const auto& p : series.boundary_points()) boundary.push_back(p.str());
  }

  const std::string report_head = "method,N,residual_tv,bound,boundary_points";
  const std::string report_row = cfg.method + "," + std::to_string(n) + "," + residual_tv.str() + "," + bound +
                                 "," + join(boundary, " ");
  HeaderBuilder h(cfg);
  h.add("method", cfg.method).add("N", std::to_string(n)).add("mode", cfg.mode);
  if (cfg.method == "lateral") h.add("side", cfg.side);
  h.add("residual_tv", residual_tv.str()).add("bound", bound);
  io::write_measure(cfg.output, inverse, h.lines());
  out << report_head << '\n' << report_row << '\n';
  return kOk;
}

std::string default_kernel(const std::string& method) {
  if (method == "theorem2") return "binomial";
  if (method == "h") return "half-pair";
  if (method == "lateral") return "forward-pair";
  if (method == "van-cittert") return "three-point";
  return "gaussian";
}

int deblur_lattice(const Config& cfg, std::ostream& out) {
  const Arithmetic mode = cfg.arithmetic();
  const LoadedLattice loaded = load_lattice(cfg.inputs.at(0), mode);
  const LatticeSignal& input = loaded.signal;
  const std::string kernel_name = cfg.kernel.empty() ? default_kernel(cfg.method) : cfg.kernel;
  const AtomicMeasure kernel = resolve_kernel(cfg, kernel_name, input.dimension());

  HeaderBuilder h(cfg);
  h.add("method", cfg.method).add("kernel", kernel_name).add("mode", cfg.mode);
  if (kernel_name == "three-point") h.add("a", cfg.a);
  h.add("observed", cfg.observed ? "yes" : "no");
  std::string params = "kernel=" + kernel_name + ";mode=" + cfg.mode;

  std::optional<LatticeSignal> reference;
  if (!cfg.observed) reference = input;
  else if (!cfg.reference.empty()) reference = load_lattice(cfg.reference, mode).signal;
  if (!cfg.reference.empty()) h.add("reference", cfg.reference);

  std::optional<LatticeSignal> recovered;
  if (cfg.method == "van-cittert") {
    const LatticeSignal g = cfg.observed ? input : apply_to_signal(input, kernel);
    const auto fac = neumann::factor_about_origin(kernel);
    const Scalar inv_c = Scalar::one(mode) / fac.center;
    std::vector<Scalar> scaled;
    for (const auto& v : g.values()) scaled.push_back(v * inv_c);
    const auto iterates =
        neumann::van_cittert_deblur(LatticeSignal(g.extent(), std::move(scaled)), fac.mu, cfg.iterations);
    recovered = iterates.back();
    h.add("iterations", std::to_string(cfg.iterations));
    params += ";iterations=" + std::to_string(cfg.iterations);
  } else {
    const std::int64_t n = single_n(cfg, 50);
    const auto series = build_series(cfg.method, kernel, n, parse_side(cfg.side));
    h.add("N", std::to_string(n));
    params += ";N=" + std::to_string(n);
    if (cfg.method == "lateral") {
      h.add("side", cfg.side);
      params += ";side=" + cfg.side;
    }
    if (!cfg.observed) {
      recovered = lateral::reconstruct(input, kernel, series).recovered;
    } else {
      std::optional<WindowSpec> target;
      if (!cfg.window.empty()) target = parse_window(cfg.window, input.dimension());
      else if (reference) target = reference->extent();
      else {
        const auto kbox = *kernel.bounding_box();
        std::vector<Interval> axes;
        for (int a = 0; a < input.dimension(); ++a)
          axes.push_back({input.extent().axis(a).lo - kbox.axis(a).lo, input.extent().axis(a).hi - kbox.axis(a).hi});
        target = WindowSpec(std::move(axes));
      }
      h.add("window", target->str());
      recovered = lateral::reconstruct_observed(input, *target, series).recovered;
    }
  }

  write_lattice(cfg, *recovered, h.lines(), loaded.maxval);
  std::optional<Metrics> m;
  if (reference) m = lattice_metrics(*recovered, *reference);
  write_metrics(cfg, out, h.lines(), params, m);
  return kOk;
}

int deblur_grid(const Config& cfg, std::ostream& out) {
  if (!cfg.kernel.empty() && cfg.kernel != "gaussian")
    throw UsageError("method " + cfg.method + " deblurs the gaussian kernel only");
  const GridSignal input = load_grid(cfg.inputs.at(0));
  const double band = cfg.band_limit.empty() ? std::numeric_limits<double>::infinity() : cfg.band_limit.front();
  const double sigma = cfg.sigma.empty() ? 0.0 : cfg.sigma.front();
  const double padding = cfg.padding.value_or(gaussian::kMinKernelCoverage);
  const auto mode = cfg.method == "analytic" ? gaussian::DeblurMode::AnalyticAmplifier
                                             : gaussian::DeblurMode::DiscreteReciprocal;

  HeaderBuilder h(cfg);
  h.add("method", cfg.method).add("kernel", "gaussian").add("observed", cfg.observed ? "yes" : "no");
  h.add("band_limit", format_double(band)).add("sigma", format_double(sigma)).add("seed", std::to_string(cfg.seed));
  std::string params = "band_limit=" + format_double(band) + ";sigma=" + format_double(sigma);

  GridSignal recovered = input;
  std::optional<GridSignal> reference;
  if (!cfg.observed) {
    h.add("padding", format_double(padding));
    params += ";padding=" + format_double(padding);
    const GridSignal g = add_noise(gaussian::blur(input, padding), sigma, cfg.seed);
    recovered = gaussian::naive_deblur(g, mode, band).signal.on_grid(input.shape());
    reference = input;
  } else {
    recovered = gaussian::naive_deblur(add_noise(input, sigma, cfg.seed), mode, band).signal;
    if (!cfg.reference.empty()) {
      h.add("reference", cfg.reference);
      reference = load_grid(cfg.reference);
    }
  }

  write_grid(cfg, recovered, h.lines());
  std::optional<Metrics> m;
  if (reference) {
    const GridSignal on_ref = recovered.on_grid(reference->shape());
    m = Metrics{max_abs_difference(on_ref, *reference), relative_l2_error(on_ref, *reference)};
  }
  write_metrics(cfg, out, h.lines(), params, m);
  return kOk;
}

int cmd_deblur(const Config& cfg, std::ostream& out) {
  if (cfg.method == "discrete-reciprocal" || cfg.method == "analytic") return deblur_grid(cfg, out);
  return deblur_lattice(cfg, out);
}

int cmd_blur(const Config& cfg, std::ostream&) {
  const std::string kernel_name = cfg.kernel.empty() ? "gaussian" : cfg.kernel;
  HeaderBuilder h(cfg);
  h.add("kernel", kernel_name);
  if (kernel_name == "gaussian") {
    const double padding = cfg.padding.value_or(gaussian::kMinKernelCoverage);
    h.add("padding", format_double(padding));
    write_grid(cfg, gaussian::blur(load_grid(cfg.inputs.at(0)), padding), h.lines());
    return kOk;
  }
  const LoadedLattice f = load_lattice(cfg.inputs.at(0), cfg.arithmetic());
  const AtomicMeasure kernel = resolve_kernel(cfg, kernel_name, f.signal.dimension());
  h.add("mode", cfg.mode);
  if (kernel_name == "three-point") h.add("a", cfg.a);
  write_lattice(cfg, apply_to_signal(f.signal, kernel), h.lines(), f.maxval);
  return kOk;
}

int experiment_growth(const Config& cfg, std::ostream& out) {
  std::vector<std::int64_t> ns = cfg.n;
  if (ns.empty())
    for (std::int64_t n = 10; n <= 100; ++n) ns.push_back(n);
  const Arithmetic mode = cfg.arithmetic();
  HeaderBuilder h(cfg);
  h.add("mode", cfg.mode).add("N", join_map(ns, [](auto n) { return std::to_string(n); }));
  std::ostringstream os;
  for (const auto& line : h.lines()) os << "# " << line << '\n';
  os << "N,max_abs_coefficient,expected,h_max_abs_coefficient\n";
  for (const auto n : ns) {
    if (n < 1) throw InvalidArgument("--N values must be >= 1");
    const Scalar binomial_max = lateral::binomial_inverse(n, mode).measure.max_abs_weight();
    const Scalar h_max = lateral::half_pair_inverse(n, mode).measure.max_abs_weight();
    os << n << ',' << binomial_max.str() << ',' << 2 * n << ',' << h_max.str() << '\n';
  }
  auto file = open_output(cfg.output);
  file << os.str();
  out << "wrote " << ns.size() << " rows to " << cfg.output << '\n';
  return kOk;
}

int experiment_noise_lateral(const Config& cfg, std::ostream& out) {
  const Arithmetic mode = cfg.arithmetic();
  std::vector<std::int64_t> ns = cfg.n.empty() ? std::vector<std::int64_t>{10, 25, 50, 100} : cfg.n;
  const std::string kernel_name = cfg.kernel.empty() ? "binomial" : cfg.kernel;
  std::string method;
  if (kernel_name == "binomial") method = "theorem2";
  else if (kernel_name == "half-pair") method = "h";
  else throw UsageError("noise-lateral supports --kernel binomial or half-pair");

  LatticeSignal f = cfg.inputs.empty() ? LatticeSignal(WindowSpec::interval(0, 0), {Scalar::one(mode)})
                                       : load_lattice(cfg.inputs.at(0), mode).signal;
  if (f.dimension() != 1) throw DimensionMismatch("noise-lateral needs a 1D signal");
  const AtomicMeasure kernel = resolve_kernel(cfg, kernel_name, 1);
  const Scalar eps = Scalar::parse(cfg.eps, mode);

  HeaderBuilder h(cfg);
  h.add("kernel", kernel_name).add("mode", cfg.mode).add("eps", cfg.eps).add("site", std::to_string(cfg.site));
  h.add("N", join_map(ns, [](auto n) { return std::to_string(n); }));
  if (cfg.inputs.empty()) h.add("signal", "delta_0");
  std::ostringstream os;
  for (const auto& line : h.lines()) os << "# " << line << '\n';
  os << "N,margin,max_dev,predicted_dev\n";
  for (const auto n : ns) {
    const auto series = build_series(method, kernel, n, lateral::Side::Right);
    const auto r = lateral::noise_amplification(f, kernel, series, eps, LatticePoint(cfg.site));
    os << n << ',' << r.margin << ',' << r.max_deviation.str() << ',' << r.predicted_deviation.str() << '\n';
  }
  auto file = open_output(cfg.output);
  file << os.str();
  out << "wrote " << ns.size() << " rows to " << cfg.output << '\n';
  return kOk;
}

int experiment_noise_gaussian(const Config& cfg, std::ostream& out) {
  const GridSignal f = cfg.inputs.empty() ? noise_test_signal() : load_grid(cfg.inputs.at(0));
  const double padding = cfg.padding.value_or(cfg.inputs.empty() ? kNoiseTestPadding : gaussian::kMinKernelCoverage);
  const std::vector<double> bands = cfg.band_limit.empty() ? std::vector<double>{4.0, 8.0} : cfg.band_limit;
  const std::vector<double> sigmas =
      cfg.sigma.empty() ? std::vector<double>{1e-12, 1e-11, 1e-10} : cfg.sigma;

  HeaderBuilder h(cfg);
  if (cfg.inputs.empty()) h.add("signal", "bump(height=1e-3,center=12.8,sd=2,n=512,spacing=0.05)");
  h.add("padding", format_double(padding)).add("seed", std::to_string(cfg.seed));
  h.add("band_limit", join_map(bands, format_double)).add("sigma", join_map(sigmas, format_double));
  std::ostringstream os;
  for (const auto& line : h.lines()) os << "# " << line << '\n';
  os << "band_limit,sigma,predicted_gain_log,observed_error,ratio\n";
  std::size_t rows = 0;
  for (const double band : bands) {
    for (const double sigma : sigmas) {
      const auto e = gaussian::noise_blowup_experiment(f, sigma, cfg.seed, band, padding);
      os << format_double(e.row.band_limit) << ',' << format_double(e.row.sigma) << ','
         << format_double(e.row.predicted_gain_log) << ',' << format_double(e.row.observed_error) << ','
         << format_double(e.row.ratio) << '\n';
      ++rows;
    }
  }
  auto file = open_output(cfg.output);
  file << os.str();
  out << "wrote " << rows << " rows to " << cfg.output << '\n';
  return kOk;
}

int cmd_experiment(const Config& cfg, std::ostream& out) {
  if (cfg.experiment == "growth") return experiment_growth(cfg, out);
  if (cfg.experiment == "noise-lateral") return experiment_noise_lateral(cfg, out);
  return experiment_noise_gaussian(cfg, out);
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const Arithmetic mode = cfg.arithmetic();
  const AtomicMeasure t = io::read_measure(cfg.inputs.at(0), mode);
  const AtomicMeasure v = io::read_measure(cfg.inputs.at(1), mode);
  const WindowSpec window = parse_window(cfg.window, t.dimension());
  const Scalar tol = cfg.tol.empty() ? default_tolerance(mode) : Scalar::parse(cfg.tol, mode);
  const InverseReport r = is_inverse(t, v, window, tol);

  HeaderBuilder h(cfg);
  h.add("mode", cfg.mode).add("window", window.str()).add("tol", tol.str());
  std::ostringstream os;
  for (const auto& line : h.lines()) os << "# " << line << '\n';
  os << "holds,inside_atoms,outside_atoms,max_inside,outside_tv\n";
  os << (r.holds ? "yes" : "no") << ',' << r.residual_inside.size() << ',' << r.residual_outside.size() << ','
     << r.max_inside.str() << ',' << total_variation(r.residual_outside).str() << '\n';
  if (cfg.output.empty()) {
    out << os.str();
  } else {
    auto file = open_output(cfg.output);
    file << os.str();
  }
  return r.holds ? kOk : kFailure;
}

// ---------------------------------------------------------------------------
// Argument parsing

const std::vector<std::string> kModes{"exact", "float"};

void add_mode(CLI::App* sub, Config& cfg) {
  sub->add_option("--mode", cfg.mode, "Arithmetic: exact rationals or float64")
      ->check(CLI::IsMember(kModes))
      ->capture_default_str();
}

void add_n(CLI::App* sub, Config& cfg, const std::string& help) {
  sub->add_option("--N", cfg.n, help)->delimiter(',');
}

void add_output(CLI::App* sub, Config& cfg, bool required = true) {
  auto* opt = sub->add_option("-o,--out", cfg.output, "Output file");
  if (required) opt->required();
}

void build(CLI::App& app, Config& cfg) {
  app.require_subcommand(1);

  auto* conv = app.add_subcommand("convolve", "Convolve two measure files");
  conv->add_option("a", cfg.inputs, "Measure files a and b")->required()->expected(2);
  add_output(conv, cfg);
  add_mode(conv, cfg);

  auto* inv = app.add_subcommand("invert", "Build a truncated inverse of a kernel measure");
  inv->add_option("kernel", cfg.inputs, "Kernel measure file")->required()->expected(1);
  inv->add_option("--method", cfg.method, "Inverse construction")
      ->required()
      ->check(CLI::IsMember({"neumann", "lateral", "theorem2", "h"}));
  add_n(inv, cfg, "Series order (neumann), term count (lateral) or half-width (theorem2, h)");
  inv->add_option("--side", cfg.side, "Support side of lateral series")
      ->check(CLI::IsMember({"right", "left"}))
      ->capture_default_str();
  add_output(inv, cfg);
  add_mode(inv, cfg);

  auto* deb = app.add_subcommand("deblur", "Run a deblurring pipeline on a signal or image");
  deb->add_option("input", cfg.inputs, "Signal (.csv, .pgm, .raw or measure text)")->required()->expected(1);
  deb->add_option("--method", cfg.method, "Deblurring method")
      ->required()
      ->check(CLI::IsMember({"van-cittert", "theorem2", "h", "lateral", "discrete-reciprocal", "analytic"}));
  deb->add_option("--kernel", cfg.kernel, "Kernel name or measure file (default depends on method)");
  deb->add_option("--a", cfg.a, "Centre weight of the three-point kernel")->capture_default_str();
  add_n(deb, cfg, "Truncation of the inverse series");
  deb->add_option("--side", cfg.side, "Support side of lateral series")
      ->check(CLI::IsMember({"right", "left"}))
      ->capture_default_str();
  deb->add_option("--iterations", cfg.iterations, "Van Cittert iterations")->capture_default_str();
  deb->add_option("--band-limit", cfg.band_limit, "Frequency cut-off of the analytic amplifier");
  deb->add_option("--sigma", cfg.sigma, "Noise added to the blurred signal");
  deb->add_option("--seed", cfg.seed, "Noise seed")->capture_default_str();
  deb->add_option("--padding", cfg.padding, "Zero padding per side before blurring");
  deb->add_option("--window", cfg.window, "Target window lo:hi of an observed signal");
  deb->add_flag("--observed", cfg.observed, "Input is already blurred; do not blur it first");
  deb->add_option("--reference", cfg.reference, "True signal for metrics when --observed");
  deb->add_option("--metrics", cfg.metrics, "Metrics CSV path (default: stdout)");
  deb->add_flag("--ascii", cfg.ascii, "Write PGM output as P2");
  add_output(deb, cfg);
  add_mode(deb, cfg);

  auto* blr = app.add_subcommand("blur", "Blur a signal or image");
  blr->add_option("input", cfg.inputs, "Signal file")->required()->expected(1);
  blr->add_option("--kernel", cfg.kernel, "Kernel name or measure file")->default_str("gaussian");
  blr->add_option("--a", cfg.a, "Centre weight of the three-point kernel")->capture_default_str();
  blr->add_option("--padding", cfg.padding, "Zero padding per side (gaussian)");
  blr->add_flag("--ascii", cfg.ascii, "Write PGM output as P2");
  add_output(blr, cfg);
  add_mode(blr, cfg);

  auto* exp = app.add_subcommand("experiment", "Run a reproducible experiment and write CSV");
  exp->add_option("name", cfg.experiment, "Experiment")
      ->required()
      ->check(CLI::IsMember({"growth", "noise-lateral", "noise-gaussian"}));
  exp->add_option("input", cfg.inputs, "Optional signal file")->expected(0, 1);
  add_n(exp, cfg, "Comma-separated N values");
  exp->add_option("--kernel", cfg.kernel, "noise-lateral kernel: binomial or half-pair");
  exp->add_option("--eps", cfg.eps, "noise-lateral perturbation")->capture_default_str();
  exp->add_option("--site", cfg.site, "noise-lateral perturbation site")->capture_default_str();
  exp->add_option("--sigma", cfg.sigma, "Comma-separated noise levels")->delimiter(',');
  exp->add_option("--band-limit", cfg.band_limit, "Comma-separated band limits")->delimiter(',');
  exp->add_option("--seed", cfg.seed, "Noise seed")->capture_default_str();
  exp->add_option("--padding", cfg.padding, "Zero padding per side");
  add_output(exp, cfg);
  add_mode(exp, cfg);

  auto* ver = app.add_subcommand("verify", "Check that two measures are inverse on a window");
  ver->add_option("t", cfg.inputs, "Measure files t and v")->required()->expected(2);
  ver->add_option("--window", cfg.window, "Window lo:hi (every axis)")->required();
  ver->add_option("--tol", cfg.tol, "Residual tolerance (default 0 exact, 1e-9 float)");
  add_output(ver, cfg, false);
  add_mode(ver, cfg);
}

}  // namespace

GridSignal noise_test_signal() {
  const GridShape shape = GridShape::line(512, 0.05, 0.0);
  std::vector<double> samples(shape.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double x = shape.axis(0).coordinate(k) - 12.8;
    samples[k] = 1e-3 * std::exp(-x * x / 8.0);
  }
  return GridSignal(shape, std::move(samples));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Convolution inverses, deblurring pipelines and experiments", "deconv"};
  build(app, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "convolve") return cmd_convolve(cfg, out);
    if (cfg.command == "invert") return cmd_invert(cfg, out);
    if (cfg.command == "deblur") return cmd_deblur(cfg, out);
    if (cfg.command == "blur") return cmd_blur(cfg, out);
    if (cfg.command == "experiment") return cmd_experiment(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DimensionMismatch& e) {
    err << "dimension mismatch: " << e.what() << '\n';
    return kDimension;
  } catch (const InsufficientTruncation& e) {
    err << "insufficient truncation: " << e.what() << " (try --N " << e.required_half_width() << ")\n";
    return kTruncation;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace deconv::cli
