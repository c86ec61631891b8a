#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "deconv/errors.hpp"
#include "deconv/grid.hpp"

namespace deconv::gaussian {

class GridTooCoarse : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class GridTooNarrow : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ReciprocalUnderflow : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An applied amplification factor exp(t) has t beyond the overflow guard.
class AmplifierOverflow : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Amplification factors exp(t) are only materialized for t below this.
inline constexpr double kOverflowGuardLog = 700.0;
/// Kernel samples are dropped beyond the radius holding this much tail mass.
inline constexpr double kTailMass = 1e-8;
/// Minimum half-width of the grid a kernel is sampled on.
inline constexpr double kMinKernelCoverage = 6.0;
inline constexpr double kMaxKernelSpacing = 0.5;

/// Standard normal density N(0, 1_d) at x.
double density(const std::vector<double>& x);

/// Pointwise samples of the density on `grid`. The grid must reach
/// [-6, 6] on every axis with spacing at most 0.5.
GridSignal sample_gaussian(const GridShape& grid);

/// Smallest grid radius r (a multiple of `spacing`) such that the sampled
/// density carries less than kTailMass of quadrature mass beyond r.
double tail_radius(int dim, double spacing);

/// Values of a transform on the frequency grid dual to a GridShape.
///
/// Bin k of an axis with M samples and spacing h has frequency
/// 2 pi k' / (M h) where k' = k for k <= (M-1)/2 and k - M otherwise.
struct Spectrum {
  GridShape grid;
  std::vector<std::complex<long double>> values;

  double frequency(int axis, std::size_t bin) const;
  /// Euclidean norm of the frequency vector of flat bin k.
  double frequency_norm(std::size_t k) const;
  /// Index of the bin with frequency u along a 1D grid, if u is a grid
  /// frequency (within 1e-9 relative).
  std::size_t bin_of(double u) const;
};

/// F(f)(u) = integral exp(i <u, x>) f(x) dx, approximated by cell-volume
/// weighted sums at the grid's dual frequencies.
Spectrum dft_forward(const GridSignal& f);
/// F^{-1}(psi)(x) = (2 pi)^{-d} integral exp(-i <x, u>) psi(u) du; the
/// exact inverse of dft_forward on the same grid (real part returned).
GridSignal dft_inverse(const Spectrum& spectrum);

/// Spectrum of the blur kernel used on `grid`: the sampled density,
/// truncated at tail_radius and renormalized to unit discrete mass, laid
/// out periodically around the origin.
Spectrum kernel_spectrum(const GridShape& grid);

/// g = f * h. The input is zero-padded by max(padding, tail_radius) on every
/// side and the result lives on the padded grid.
GridSignal blur(const GridSignal& f, double padding = kMinKernelCoverage);

/// Number of padding samples per side that blur() adds.
std::vector<std::size_t> blur_padding(const GridShape& grid, double padding = kMinKernelCoverage);

enum class DeblurMode {
  /// Multiply by exp(|u|^2 / 2) at the grid frequencies.
  AnalyticAmplifier,
  /// Divide by the discrete spectrum of the blur kernel.
  DiscreteReciprocal,
};

struct SpectrumDiagnostics {
  std::vector<double> frequency_norm;
  /// ln of the amplification at each bin, band limit ignored.
  std::vector<double> log_amplification;
  double max_log_amplification = 0.0;
  double band_limit = std::numeric_limits<double>::infinity();
  /// ln of the largest factor actually applied (within the band limit).
  double applied_max_log_amplification = 0.0;
  /// ln of the RMS output noise per unit input noise standard deviation:
  /// 0.5 ln((1/M) sum over applied bins of amp^2).
  double noise_gain_log = 0.0;
};

struct DeblurResult {
  GridSignal signal;
  SpectrumDiagnostics diagnostics;
};

/// Fourier inversion of the blur. Bins with |u| > band_limit are zeroed
/// (analytic mode only).
DeblurResult naive_deblur(const GridSignal& g, DeblurMode mode,
                          double band_limit = std::numeric_limits<double>::infinity());

/// Diagnostics of the analytic amplifier on a grid, without touching data.
SpectrumDiagnostics amplifier_diagnostics(const GridShape& grid, double band_limit);

struct NoiseRow {
  double band_limit;
  double sigma;
  /// ln(sigma * exp(noise_gain_log)), the predicted RMS noise error.
  double predicted_gain_log;
  /// RMS of the noisy reconstruction minus f over the padded grid.
  double observed_error;
  /// observed_error / exp(predicted_gain_log).
  double ratio;
};

struct NoiseExperiment {
  SpectrumDiagnostics diagnostics;
  NoiseRow row;
  /// RMS error of the noiseless band-limited reconstruction.
  double band_error;
  /// RMS of the noisy minus the noiseless reconstruction.
  double noise_error;
};

/// Blurs f, adds i.i.d. N(0, sigma^2) noise (mt19937_64 seeded with `seed`)
/// to every sample of g, and deblurs with the band-limited analytic
/// amplifier.
NoiseExperiment noise_blowup_experiment(const GridSignal& f, double sigma, std::uint64_t seed,
                                        double band_limit, double padding = kMinKernelCoverage);

struct ProbeOptions {
  double spacing = 0.25;
  /// Standard deviation of the Gaussian bump standing in for delta_0.
  double target_width = 0.5;
  /// Extra grid range beyond the candidate support, on each side.
  double margin = 8.0;
};

struct ProbeResult {
  double radius;
  std::size_t unknowns;
  /// min_k ||h * k - target|| / ||target|| over k supported in [-r, r].
  double residual;
  /// Same with k restricted to a single multiple of delta_0.
  double single_multiple_residual;
};

/// Least-squares search for a compactly supported approximate inverse of
/// the blur on [-radius, radius]. Reports the residual; proves nothing.
ProbeResult kernel_inverse_probe(double radius, const ProbeOptions& options = {});
/// Probe over several radii sharing one grid, so the feasible sets nest.
std::vector<ProbeResult> kernel_inverse_probe(const std::vector<double>& radii,
                                              const ProbeOptions& options = {});

}  // namespace deconv::gaussian
