#include "deconv/neumann.hpp"

namespace deconv::neumann {

NeumannConfig NeumannConfig::fixed_order(unsigned order, unsigned cap) {
  if (cap < order)
    throw InvalidArgument("order cap " + std::to_string(cap) + " is below the fixed order " +
                          std::to_string(order));
  return NeumannConfig(order, std::nullopt, cap);
}

NeumannConfig NeumannConfig::residual_target(const Scalar& target, unsigned cap) {
  if (target.sign() <= 0) throw InvalidArgument("residual target must be > 0");
  return NeumannConfig(0, target, cap);
}

namespace {

Scalar require_contraction(const AtomicMeasure& mu) {
  Scalar norm = total_variation(mu);
  if (norm >= Scalar::one(mu.mode())) throw NormNotLessThanOne(norm);
  return norm;
}

unsigned resolve_order(const Scalar& norm, const NeumannConfig& cfg) {
  if (cfg.is_fixed()) return cfg.order();
  const Scalar target = cfg.target()->as(norm.mode());
  Scalar bound = norm;  // ||mu||^(n+1) at n = 0
  for (unsigned n = 0; n <= cfg.cap(); ++n) {
    if (bound <= target) return n;
    bound *= norm;
  }
  throw OrderCapExceeded("residual target " + target.str() + " needs more than " +
                         std::to_string(cfg.cap()) + " terms at ||mu|| = " +
                         std::to_string(norm.to_double()));
}

}  // namespace

NeumannResult neumann_inverse(const AtomicMeasure& mu, const NeumannConfig& cfg) {
  const Scalar norm = require_contraction(mu);
  const unsigned order = resolve_order(norm, cfg);

  const AtomicMeasure one = unit(mu.dimension(), mu.mode());
  const Scalar minus_one = Scalar::integer(mu.mode(), -1);
  AtomicMeasure nu = one;
  AtomicMeasure term = one;  // (-1)^k mu^{k*}
  for (unsigned k = 1; k <= order; ++k) {
    term = scale(convolve(term, mu), minus_one);
    nu = nu + term;
  }

  AtomicMeasure residual = convolve(one + mu, nu) - one;
  Scalar residual_tv = total_variation(residual);
  NeumannReport report{order, std::move(residual), std::move(residual_tv), norm.pow(order + 1), norm};
  return {std::move(nu), std::move(report)};
}

AtomicMeasure three_point_kernel(const Scalar& a) {
  const Arithmetic m = a.mode();
  const Scalar side = (Scalar::one(m) - a) / Scalar::integer(m, 2);
  return AtomicMeasure(1, m, {{LatticePoint(-1), side}, {LatticePoint(0), a}, {LatticePoint(1), side}});
}

NeumannResult invert_three_point(const Scalar& a, const NeumannConfig& cfg) {
  const Arithmetic m = a.mode();
  const Scalar half = Scalar::one(m) / Scalar::integer(m, 2);
  if (!(a > half && a < Scalar::one(m)))
    throw ParameterOutOfRange("three-point parameter a = " + a.str() +
                              " must lie in (1/2, 1); use the symmetric lateral inverse at a = 1/2");
  const Scalar c = (Scalar::one(m) - a) / (Scalar::integer(m, 2) * a);
  const AtomicMeasure mu(1, m, {{LatticePoint(-1), c}, {LatticePoint(1), c}});
  NeumannResult inner = neumann_inverse(mu, cfg);
  inner.inverse = scale(inner.inverse, Scalar::one(m) / a);
  return inner;
}

Factorization factor_about_origin(const AtomicMeasure& kernel) {
  const Scalar center = kernel.weight(LatticePoint::origin(kernel.dimension()));
  if (center.is_zero())
    throw ParameterOutOfRange("kernel has no mass at the origin; cannot factor as c (delta_0 + mu)");
  const AtomicMeasure normalized = scale(kernel, Scalar::one(kernel.mode()) / center);
  return {center, normalized - unit(kernel.dimension(), kernel.mode())};
}

std::vector<LatticeSignal> van_cittert_deblur(const LatticeSignal& g, const AtomicMeasure& mu,
                                              unsigned iterations) {
  (void)require_contraction(mu);
  const AtomicMeasure g_atoms = g.to_measure();
  std::vector<LatticeSignal> iterates;
  iterates.reserve(iterations + 1);
  iterates.push_back(g);
  for (unsigned k = 0; k < iterations; ++k) {
    const LatticeSignal blurred = apply_to_signal(iterates.back(), mu);
    const AtomicMeasure next = g_atoms - blurred.to_measure();
    // Extent grows by the bounding box of mu each step.
    const auto box = blurred.extent().hull(g.extent());
    iterates.push_back(LatticeSignal::from_measure(next, box));
  }
  return iterates;
}

}  // namespace deconv::neumann
