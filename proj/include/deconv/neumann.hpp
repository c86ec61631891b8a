#pragma once

#include <optional>
#include <vector>

#include "deconv/errors.hpp"
#include "deconv/measure.hpp"

namespace deconv::neumann {

/// ||mu|| >= 1, so the series for (delta_0 + mu)^-1 need not converge.
class NormNotLessThanOne : public PreconditionError {
 public:
  explicit NormNotLessThanOne(const Scalar& norm)
      : PreconditionError("total variation of mu is " + norm.str() + " (" +
                          std::to_string(norm.to_double()) + "), must be < 1"),
        norm_(norm) {}
  const Scalar& norm() const noexcept { return norm_; }

 private:
  Scalar norm_;
};

class OrderCapExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ParameterOutOfRange : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Truncation rule for the series delta_0 - mu + mu^2 - ...
///
/// A residual target stops at the first order n with ||mu||^(n+1) <= target.
/// That is the a-priori bound, not the measured residual.
class NeumannConfig {
 public:
  static NeumannConfig fixed_order(unsigned order, unsigned cap = 1000);
  static NeumannConfig residual_target(const Scalar& target, unsigned cap = 1000);

  bool is_fixed() const noexcept { return !target_.has_value(); }
  unsigned order() const noexcept { return order_; }
  const std::optional<Scalar>& target() const noexcept { return target_; }
  unsigned cap() const noexcept { return cap_; }

 private:
  NeumannConfig(unsigned order, std::optional<Scalar> target, unsigned cap)
      : order_(order), target_(std::move(target)), cap_(cap) {}

  unsigned order_;
  std::optional<Scalar> target_;
  unsigned cap_;
};

struct NeumannReport {
  unsigned order;
  /// (delta_0 + mu) * nu_n - delta_0, computed by direct convolution.
  AtomicMeasure residual;
  Scalar residual_tv;
  /// ||mu||^(n+1)
  Scalar bound;
  Scalar mu_norm;
};

struct NeumannResult {
  AtomicMeasure inverse;
  NeumannReport report;
};

/// nu_n = delta_0 + sum_{k=1..n} (-1)^k mu^{k*}, the truncated inverse of
/// delta_0 + mu. Requires ||mu|| < 1.
NeumannResult neumann_inverse(const AtomicMeasure& mu, const NeumannConfig& cfg);

/// (1-a)/2 delta_{-1} + a delta_0 + (1-a)/2 delta_1
AtomicMeasure three_point_kernel(const Scalar& a);

/// Inverts three_point_kernel(a) for 1/2 < a < 1 by writing it as
/// a (delta_0 + mu) with mu = (1-a)/(2a) (delta_{-1} + delta_1). The report
/// describes the inner series for mu. a = 1/2 is rejected; the binomial
/// kernel needs the symmetric series from the lateral module instead.
NeumannResult invert_three_point(const Scalar& a, const NeumannConfig& cfg);

/// Splits a kernel with non-zero central weight c as c (delta_0 + mu).
struct Factorization {
  Scalar center;
  AtomicMeasure mu;
};
Factorization factor_about_origin(const AtomicMeasure& kernel);

/// Van Cittert iteration for g = f * (delta_0 + mu):
///   f0 = g,  f_{k+1} = g - mu * f_k.
/// Returns f0 .. f_iterations. Each iterate equals nu_k * g.
std::vector<LatticeSignal> van_cittert_deblur(const LatticeSignal& g, const AtomicMeasure& mu,
                                              unsigned iterations);

}  // namespace deconv::neumann
