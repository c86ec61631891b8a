#include "deconv/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <fftw3.h>

namespace deconv::gaussian {

namespace {

using cplx = std::complex<long double>;

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// Unnormalized multi-dimensional DFT with exponent sign `sign` (+1 or -1).
std::vector<cplx> transform(std::vector<cplx> data, const GridShape& grid, int sign) {
  std::vector<int> n;
  for (const auto& ax : grid.axes()) n.push_back(static_cast<int>(ax.count));
  auto* buf = reinterpret_cast<fftwl_complex*>(data.data());
  fftwl_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftwl_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf,
                          sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftwl_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftwl_destroy_plan(plan);
  }
  return data;
}

long signed_bin(std::size_t k, std::size_t m) {
  return k <= (m - 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(m);
}

std::vector<std::size_t> split_index(std::size_t k, const GridShape& grid) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(grid.dimension()));
  for (std::size_t a = idx.size(); a-- > 0;) {
    idx[a] = k % grid.axes()[a].count;
    k /= grid.axes()[a].count;
  }
  return idx;
}

/// Phase exp(sign * i <u_k, origin>) for every bin.
std::vector<cplx> origin_phase(const Spectrum& s, int sign) {
  std::vector<cplx> phase(s.grid.size());
  for (std::size_t k = 0; k < phase.size(); ++k) {
    const auto idx = split_index(k, s.grid);
    long double arg = 0.0L;
    for (int a = 0; a < s.grid.dimension(); ++a)
      arg += static_cast<long double>(s.frequency(a, idx[static_cast<std::size_t>(a)])) *
             static_cast<long double>(s.grid.axis(a).origin);
    phase[k] = std::polar(1.0L, sign * arg);
  }
  return phase;
}

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  long double s = 0.0L;
  for (double x : xs) s += std::exp(static_cast<long double>(x - m));
  return m + static_cast<double>(std::log(s));
}

}  // namespace

double density(const std::vector<double>& x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(x.size()));
  return norm * std::exp(-0.5 * r2);
}

GridSignal sample_gaussian(const GridShape& grid) {
  for (const auto& ax : grid.axes()) {
    if (ax.spacing > kMaxKernelSpacing)
      throw GridTooCoarse("grid spacing " + std::to_string(ax.spacing) + " exceeds " +
                          std::to_string(kMaxKernelSpacing));
    const double slack = 1e-9 * ax.spacing;
    if (ax.origin > -kMinKernelCoverage + slack || ax.last() < kMinKernelCoverage - slack)
      throw GridTooNarrow("grid axis [" + std::to_string(ax.origin) + ", " + std::to_string(ax.last()) +
                          "] does not cover [-6, 6]");
  }
  std::vector<double> samples(grid.size());
  for (std::size_t k = 0; k < samples.size(); ++k) samples[k] = density(grid.position(k));
  return GridSignal(grid, std::move(samples));
}

double tail_radius(int dim, double spacing) {
  if (dim < 1 || dim > 2) throw InvalidArgument("dimension must be 1 or 2");
  const double reach = 12.0;
  const auto half = static_cast<long>(std::ceil(reach / spacing));
  // Quadrature mass by integer squared radius (in units of spacing^2).
  std::vector<std::pair<long, double>> shells;
  const double cell = std::pow(spacing, dim);
  for (long i = -half; i <= half; ++i) {
    if (dim == 1) {
      shells.emplace_back(i * i, cell * density({static_cast<double>(i) * spacing}));
      continue;
    }
    for (long j = -half; j <= half; ++j)
      shells.emplace_back(i * i + j * j, cell * density({static_cast<double>(i) * spacing,
                                                          static_cast<double>(j) * spacing}));
  }
  std::sort(shells.begin(), shells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  // Walk inwards: tail(n) = mass with squared index radius > n^2.
  double tail = 0.0;
  std::size_t pos = 0;
  for (long n = half; n >= 0; --n) {
    while (pos < shells.size() && shells[pos].first > n * n) tail += shells[pos++].second;
    if (tail >= kTailMass) return static_cast<double>(n + 1) * spacing;
  }
  return 0.0;
}

double Spectrum::frequency(int axis, std::size_t bin) const {
  const auto& ax = grid.axis(axis);
  return 2.0 * std::numbers::pi * static_cast<double>(signed_bin(bin, ax.count)) /
         (static_cast<double>(ax.count) * ax.spacing);
}

double Spectrum::frequency_norm(std::size_t k) const {
  const auto idx = split_index(k, grid);
  double s = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) {
    const double u = frequency(a, idx[static_cast<std::size_t>(a)]);
    s += u * u;
  }
  return std::sqrt(s);
}

std::size_t Spectrum::bin_of(double u) const {
  if (grid.dimension() != 1) throw DimensionMismatch("bin_of needs a 1D spectrum");
  for (std::size_t k = 0; k < grid.axis(0).count; ++k)
    if (std::abs(frequency(0, k) - u) <= 1e-9 * std::max(1.0, std::abs(u))) return k;
  throw InvalidArgument("frequency " + std::to_string(u) + " is not on the grid");
}

Spectrum dft_forward(const GridSignal& f) {
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  Spectrum s{f.shape(), transform(std::move(data), f.shape(), +1)};
  const auto phase = origin_phase(s, +1);
  const long double cell = f.shape().cell_volume();
  for (std::size_t k = 0; k < s.values.size(); ++k) s.values[k] *= cell * phase[k];
  return s;
}

GridSignal dft_inverse(const Spectrum& spectrum) {
  const auto phase = origin_phase(spectrum, -1);
  std::vector<cplx> data(spectrum.values.size());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = spectrum.values[k] * phase[k];
  data = transform(std::move(data), spectrum.grid, -1);
  long double norm = 1.0L;
  for (const auto& ax : spectrum.grid.axes())
    norm *= static_cast<long double>(ax.count) * static_cast<long double>(ax.spacing);
  std::vector<double> out(data.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<double>(data[k].real() / norm);
  return GridSignal(spectrum.grid, std::move(out));
}

Spectrum kernel_spectrum(const GridShape& grid) {
  const double spacing = grid.axis(0).spacing;
  for (const auto& ax : grid.axes())
    if (std::abs(ax.spacing - spacing) > 1e-12 * spacing)
      throw InvalidArgument("blur kernel needs equal spacing on every axis");
  const double radius = tail_radius(grid.dimension(), spacing);
  const double cutoff = radius + 1e-9 * spacing;

  std::vector<cplx> data(grid.size());
  long double mass = 0.0L;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto idx = split_index(k, grid);
    std::vector<double> x(idx.size());
    double r2 = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      x[a] = static_cast<double>(signed_bin(idx[a], grid.axes()[a].count)) * spacing;
      r2 += x[a] * x[a];
    }
    if (std::sqrt(r2) > cutoff) continue;
    data[k] = density(x);
    mass += data[k].real();
  }
  for (auto& v : data) v /= mass;  // unit discrete mass
  // Kernel origin is 0, so no phase correction is needed.
  return Spectrum{grid, transform(std::move(data), grid, +1)};
}

std::vector<std::size_t> blur_padding(const GridShape& grid, double padding) {
  std::vector<std::size_t> pad;
  for (const auto& ax : grid.axes()) {
    const double reach = std::max({padding, kMinKernelCoverage, tail_radius(grid.dimension(), ax.spacing)});
    pad.push_back(static_cast<std::size_t>(std::ceil(reach / ax.spacing - 1e-9)));
  }
  return pad;
}

GridSignal blur(const GridSignal& f, double padding) {
  const GridSignal padded = f.zero_padded(blur_padding(f.shape(), padding));
  Spectrum s = dft_forward(padded);
  const Spectrum k = kernel_spectrum(padded.shape());
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= k.values[i];
  return dft_inverse(s);
}

namespace {

SpectrumDiagnostics diagnostics_from(const Spectrum& shape, std::vector<double> log_amp,
                                     double band_limit) {
  SpectrumDiagnostics d;
  d.band_limit = band_limit;
  d.frequency_norm.resize(shape.values.size());
  std::vector<double> applied;
  d.applied_max_log_amplification = -std::numeric_limits<double>::infinity();
  d.max_log_amplification = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < log_amp.size(); ++k) {
    d.frequency_norm[k] = shape.frequency_norm(k);
    d.max_log_amplification = std::max(d.max_log_amplification, log_amp[k]);
    if (d.frequency_norm[k] <= band_limit) {
      applied.push_back(2.0 * log_amp[k]);
      d.applied_max_log_amplification = std::max(d.applied_max_log_amplification, log_amp[k]);
    }
  }
  d.noise_gain_log = 0.5 * (log_sum_exp(applied) - std::log(static_cast<double>(log_amp.size())));
  d.log_amplification = std::move(log_amp);
  return d;
}

}  // namespace

SpectrumDiagnostics amplifier_diagnostics(const GridShape& grid, double band_limit) {
  Spectrum s{grid, std::vector<cplx>(grid.size())};
  std::vector<double> log_amp(grid.size());
  for (std::size_t k = 0; k < log_amp.size(); ++k) {
    const double u = s.frequency_norm(k);
    log_amp[k] = 0.5 * u * u;
  }
  return diagnostics_from(s, std::move(log_amp), band_limit);
}

DeblurResult naive_deblur(const GridSignal& g, DeblurMode mode, double band_limit) {
  Spectrum s = dft_forward(g);
  if (mode == DeblurMode::DiscreteReciprocal) {
    const Spectrum k = kernel_spectrum(g.shape());
    std::vector<double> log_amp(k.values.size());
    for (std::size_t i = 0; i < k.values.size(); ++i) {
      const long double mag = std::abs(k.values[i]);
      if (mag < 1e-300L) {
        std::ostringstream os;
        os << "kernel spectrum magnitude " << static_cast<double>(mag) << " at |u| = "
           << s.frequency_norm(i) << " is below 1e-300";
        throw ReciprocalUnderflow(os.str());
      }
      log_amp[i] = -static_cast<double>(std::log(mag));
      s.values[i] /= k.values[i];
    }
    auto diag = diagnostics_from(s, std::move(log_amp), std::numeric_limits<double>::infinity());
    return {dft_inverse(s), std::move(diag)};
  }

  SpectrumDiagnostics diag = amplifier_diagnostics(g.shape(), band_limit);
  if (diag.applied_max_log_amplification >= kOverflowGuardLog) {
    std::ostringstream os;
    os << "amplification exp(" << diag.applied_max_log_amplification
       << ") exceeds the overflow guard exp(" << kOverflowGuardLog << "); band-limit the inversion";
    throw AmplifierOverflow(os.str());
  }
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (diag.frequency_norm[i] <= band_limit)
      s.values[i] *= std::exp(static_cast<long double>(diag.log_amplification[i]));
    else
      s.values[i] = 0.0L;
  }
  return {dft_inverse(s), std::move(diag)};
}

NoiseExperiment noise_blowup_experiment(const GridSignal& f, double sigma, std::uint64_t seed,
                                        double band_limit, double padding) {
  if (sigma < 0.0) throw InvalidArgument("noise sigma must be >= 0");
  const GridSignal g = blur(f, padding);
  const GridSignal reference = f.on_grid(g.shape());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noisy = g.samples();
  for (double& v : noisy) v += sigma * normal(rng);

  const DeblurResult clean = naive_deblur(g, DeblurMode::AnalyticAmplifier, band_limit);
  const DeblurResult dirty =
      naive_deblur(GridSignal(g.shape(), std::move(noisy)), DeblurMode::AnalyticAmplifier, band_limit);

  NoiseExperiment out{dirty.diagnostics, {}, rms_difference(clean.signal, reference),
                      rms_difference(dirty.signal, clean.signal)};
  out.row.band_limit = band_limit;
  out.row.sigma = sigma;
  out.row.predicted_gain_log = std::log(sigma) + dirty.diagnostics.noise_gain_log;
  out.row.observed_error = rms_difference(dirty.signal, reference);
  out.row.ratio = sigma > 0.0 ? std::exp(std::log(out.row.observed_error) - out.row.predicted_gain_log)
                              : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::vector<ProbeResult> kernel_inverse_probe(const std::vector<double>& radii,
                                              const ProbeOptions& options) {
  if (radii.empty()) return {};
  for (double r : radii)
    if (!(r > 0.0)) throw InvalidArgument("probe radius must be > 0");
  const double h = options.spacing;
  const double r_max = *std::max_element(radii.begin(), radii.end());
  const auto half = static_cast<long>(std::ceil((r_max + options.margin) / h));
  const long rows = 2 * half + 1;

  Eigen::VectorXd target(rows);
  const double w = options.target_width;
  for (long i = 0; i < rows; ++i) {
    const double x = static_cast<double>(i - half) * h;
    target(i) = std::exp(-0.5 * x * x / (w * w)) / (w * std::sqrt(2.0 * std::numbers::pi));
  }
  const double target_norm = target.norm();

  auto residual_for = [&](long k_half) {
    const long cols = 2 * k_half + 1;
    Eigen::MatrixXd a(rows, cols);
    for (long i = 0; i < rows; ++i)
      for (long j = 0; j < cols; ++j) {
        const double x = static_cast<double>(i - half) * h;
        const double s = static_cast<double>(j - k_half) * h;
        a(i, j) = h * density({x - s});
      }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::VectorXd qtb = qr.householderQ().transpose() * target;
    return qtb.tail(rows - cols).norm() / target_norm;
  };

  const double single = residual_for(0);
  std::vector<ProbeResult> out;
  for (double r : radii) {
    const auto k_half = static_cast<long>(std::floor(r / h + 1e-9));
    out.push_back({r, static_cast<std::size_t>(2 * k_half + 1), residual_for(k_half), single});
  }
  return out;
}

ProbeResult kernel_inverse_probe(double radius, const ProbeOptions& options) {
  return kernel_inverse_probe(std::vector<double>{radius}, options).front();
}

}  // namespace deconv::gaussian
