#pragma once

#include <cstdint>
#include <vector>

#include "deconv/errors.hpp"
#include "deconv/measure.hpp"

namespace deconv::lateral {

class UnsupportedKernel : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Right: series supported towards +infinity. Left: towards -infinity.
enum class Side { Right, Left };

/// delta_0 + delta_1
AtomicMeasure forward_pair(Arithmetic mode = Arithmetic::Exact);
/// delta_{-1} + delta_0
AtomicMeasure backward_pair(Arithmetic mode = Arithmetic::Exact);
/// 1/4 delta_{-1} + 1/2 delta_0 + 1/4 delta_1
AtomicMeasure binomial_kernel(Arithmetic mode = Arithmetic::Exact);
/// 1/2 (delta_0 + delta_1)
AtomicMeasure half_pair_kernel(Arithmetic mode = Arithmetic::Exact);

/// A finite piece of an infinite inverse series together with the exact
/// defect it leaves: kernel * measure = delta_0 + boundary_residual.
struct TruncatedSeries {
  AtomicMeasure measure;
  AtomicMeasure kernel;
  /// Nominal window the series was truncated to.
  WindowSpec window;
  /// Atoms of kernel * measure - delta_0 whose magnitude exceeds the mode's
  /// default tolerance.
  AtomicMeasure boundary_residual;

  std::vector<LatticePoint> boundary_points() const;
  /// Truncation half-width: the largest |coordinate| of the window.
  std::int64_t half_width() const;
};

/// Computes the boundary residual of `measure` as an inverse of `kernel`.
TruncatedSeries make_truncated(const AtomicMeasure& kernel, const AtomicMeasure& measure,
                               const WindowSpec& window);

/// First `terms` terms of the one-sided inverse of delta_0 + delta_1 or
/// delta_{-1} + delta_0:
///   forward, Right:   delta_0 - delta_1 + delta_2 - ...
///   backward, Right:  delta_1 - delta_2 + delta_3 - ...
///   forward, Left:    delta_{-1} - delta_{-2} + delta_{-3} - ...
///   backward, Left:   delta_0 - delta_{-1} + delta_{-2} - ...
TruncatedSeries unit_pair_inverse(const AtomicMeasure& kernel, Side side, std::int64_t terms);

/// Convolution of two truncated inverses; an inverse of the product kernel.
TruncatedSeries cauchy_product(const TruncatedSeries& a, const TruncatedSeries& b);

/// 4x the Cauchy product of the two one-sided inverses on `side`: a
/// one-sided inverse of the binomial kernel with coefficients 4k(-1)^{k+1}.
TruncatedSeries one_sided_binomial_inverse(Side side, std::int64_t terms,
                                           Arithmetic mode = Arithmetic::Exact);

/// Symmetric inverse of the binomial kernel on [-N, N]: the coefficient of
/// delta_n is 2|n|(-1)^{|n|+1}, with no atom at 0.
TruncatedSeries binomial_inverse(std::int64_t half_width, Arithmetic mode = Arithmetic::Exact);

/// Two-sided inverse of 1/2 (delta_0 + delta_1) on [-N, N]: weight (-1)^n for
/// n >= 0 and (-1)^{n+1} for n < 0.
TruncatedSeries half_pair_inverse(std::int64_t half_width, Arithmetic mode = Arithmetic::Exact);

/// Separable 2D inverse: kernel and series are tensor products.
TruncatedSeries tensor_product(const TruncatedSeries& a, const TruncatedSeries& b);

struct MarginReport {
  /// f is supported in [-s, s]^d.
  std::int64_t support_radius;
  std::int64_t half_width;
  /// Smallest N satisfying the sufficient rule N > 2s + 2.
  std::int64_t sufficient_half_width;
  /// Chebyshev distance from the output window to the nearest contaminated
  /// point; at least 1 when recovery is exact.
  std::int64_t margin;
  /// f * boundary_residual: the full contamination of the reconstruction.
  AtomicMeasure contamination;
  WindowSpec output_window;
};

struct Reconstruction {
  LatticeSignal recovered;
  MarginReport report;
};

/// (f * kernel) * inverse restricted to [-s, s]^d, where s bounds the
/// extent of f. Throws InsufficientTruncation when boundary contamination
/// would reach that window.
Reconstruction reconstruct(const LatticeSignal& f, const AtomicMeasure& kernel,
                           const TruncatedSeries& inverse);

/// Same pipeline starting from an already blurred observation g.
Reconstruction reconstruct_observed(const LatticeSignal& g, const WindowSpec& target,
                                    const TruncatedSeries& inverse);

struct AmplificationReport {
  std::int64_t half_width;
  std::int64_t margin;
  Scalar max_deviation;
  /// |eps| * max |coefficient of the inverse|
  Scalar predicted_deviation;
  LatticePoint argmax;
};

/// Perturbs the observation f * kernel by eps at `site` and measures the
/// largest change of the full (unrestricted) reconstruction.
AmplificationReport noise_amplification(const LatticeSignal& f, const AtomicMeasure& kernel,
                                        const TruncatedSeries& inverse, const Scalar& eps,
                                        const LatticePoint& site);

}  // namespace deconv::lateral
