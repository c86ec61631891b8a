#include "deconv/lateral.hpp"

#include <algorithm>
#include <limits>

namespace deconv::lateral {

namespace {

Scalar sign_power(Arithmetic mode, std::int64_t k) {
  return Scalar::integer(mode, (k % 2 == 0) ? 1 : -1);
}

WindowSpec support_window(const AtomicMeasure& m) {
  auto box = m.bounding_box();
  if (!box) return WindowSpec::centered(m.dimension(), 0);
  return *box;
}

void require_positive(std::int64_t n, const char* what) {
  if (n < 1) throw InvalidArgument(std::string(what) + " must be >= 1, got " + std::to_string(n));
}

}  // namespace

AtomicMeasure forward_pair(Arithmetic mode) {
  return AtomicMeasure(1, mode, {{LatticePoint(0), Scalar::one(mode)}, {LatticePoint(1), Scalar::one(mode)}});
}

AtomicMeasure backward_pair(Arithmetic mode) {
  return AtomicMeasure(1, mode, {{LatticePoint(-1), Scalar::one(mode)}, {LatticePoint(0), Scalar::one(mode)}});
}

AtomicMeasure binomial_kernel(Arithmetic mode) {
  const Scalar quarter = Scalar::one(mode) / Scalar::integer(mode, 4);
  const Scalar half = Scalar::one(mode) / Scalar::integer(mode, 2);
  return AtomicMeasure(1, mode, {{LatticePoint(-1), quarter}, {LatticePoint(0), half}, {LatticePoint(1), quarter}});
}

AtomicMeasure half_pair_kernel(Arithmetic mode) {
  return scale(forward_pair(mode), Scalar::one(mode) / Scalar::integer(mode, 2));
}

std::vector<LatticePoint> TruncatedSeries::boundary_points() const {
  std::vector<LatticePoint> pts;
  for (const auto& [p, w] : boundary_residual.atoms()) pts.push_back(p);
  return pts;
}

std::int64_t TruncatedSeries::half_width() const {
  std::int64_t n = 0;
  for (int a = 0; a < window.dimension(); ++a)
    n = std::max({n, window.axis(a).lo < 0 ? -window.axis(a).lo : window.axis(a).lo,
                  window.axis(a).hi < 0 ? -window.axis(a).hi : window.axis(a).hi});
  return n;
}

TruncatedSeries make_truncated(const AtomicMeasure& kernel, const AtomicMeasure& measure,
                               const WindowSpec& window) {
  const AtomicMeasure defect = convolve(kernel, measure) - unit(kernel.dimension(), kernel.mode());
  const Scalar tol = default_tolerance(kernel.mode());
  std::vector<Atom> boundary;
  for (const auto& [p, w] : defect.atoms())
    if (w.abs() > tol) boundary.emplace_back(p, w);
  return {measure, kernel, window, AtomicMeasure(kernel.dimension(), kernel.mode(), boundary)};
}

TruncatedSeries unit_pair_inverse(const AtomicMeasure& kernel, Side side, std::int64_t terms) {
  require_positive(terms, "number of terms");
  const Arithmetic mode = kernel.mode();
  bool forward = false;
  if (kernel.dimension() == 1 && kernel == forward_pair(mode)) {
    forward = true;
  } else if (!(kernel.dimension() == 1 && kernel == backward_pair(mode))) {
    throw UnsupportedKernel("lateral unit-pair inverse needs delta_0 + delta_1 or delta_-1 + delta_0, got " +
                            kernel.str());
  }

  // Position of the k-th term (k = 0, 1, ...) with weight (-1)^k.
  std::int64_t start = 0;
  std::int64_t step = 1;
  if (forward && side == Side::Right) {
    start = 0;
    step = 1;
  } else if (!forward && side == Side::Right) {
    start = 1;
    step = 1;
  } else if (forward && side == Side::Left) {
    start = -1;
    step = -1;
  } else {
    start = 0;
    step = -1;
  }
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(terms));
  for (std::int64_t k = 0; k < terms; ++k) atoms.emplace_back(LatticePoint(start + step * k), sign_power(mode, k));
  AtomicMeasure series(1, mode, atoms);
  const WindowSpec window = support_window(series);
  return make_truncated(kernel, series, window);
}

TruncatedSeries cauchy_product(const TruncatedSeries& a, const TruncatedSeries& b) {
  return make_truncated(convolve(a.kernel, b.kernel), convolve(a.measure, b.measure),
                        a.window.sum(b.window));
}

TruncatedSeries one_sided_binomial_inverse(Side side, std::int64_t terms, Arithmetic mode) {
  const TruncatedSeries product = cauchy_product(unit_pair_inverse(forward_pair(mode), side, terms),
                                                 unit_pair_inverse(backward_pair(mode), side, terms));
  return make_truncated(binomial_kernel(mode), scale(product.measure, Scalar::integer(mode, 4)),
                        product.window);
}

TruncatedSeries binomial_inverse(std::int64_t half_width, Arithmetic mode) {
  require_positive(half_width, "truncation half-width");
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(2 * half_width));
  for (std::int64_t n = -half_width; n <= half_width; ++n) {
    if (n == 0) continue;
    const std::int64_t m = n < 0 ? -n : n;
    atoms.emplace_back(LatticePoint(n), Scalar::integer(mode, 2 * m) * sign_power(mode, m + 1));
  }
  return make_truncated(binomial_kernel(mode), AtomicMeasure(1, mode, atoms),
                        WindowSpec::centered(1, half_width));
}

TruncatedSeries half_pair_inverse(std::int64_t half_width, Arithmetic mode) {
  require_positive(half_width, "truncation half-width");
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(2 * half_width + 1));
  for (std::int64_t n = -half_width; n <= half_width; ++n)
    atoms.emplace_back(LatticePoint(n), n >= 0 ? sign_power(mode, n) : sign_power(mode, n + 1));
  return make_truncated(half_pair_kernel(mode), AtomicMeasure(1, mode, atoms),
                        WindowSpec::centered(1, half_width));
}

TruncatedSeries tensor_product(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.window.dimension() != 1 || b.window.dimension() != 1)
    throw DimensionMismatch("tensor product needs two 1D series");
  return make_truncated(deconv::tensor_product(a.kernel, b.kernel),
                        deconv::tensor_product(a.measure, b.measure),
                        WindowSpec::box(a.window.axis(0), b.window.axis(0)));
}

namespace {

std::int64_t extent_radius(const WindowSpec& w) {
  std::int64_t s = 0;
  for (int a = 0; a < w.dimension(); ++a)
    s = std::max({s, w.axis(a).lo < 0 ? -w.axis(a).lo : w.axis(a).lo,
                  w.axis(a).hi < 0 ? -w.axis(a).hi : w.axis(a).hi});
  return s;
}

std::int64_t contamination_margin(const AtomicMeasure& contamination, const WindowSpec& window) {
  std::int64_t margin = std::numeric_limits<std::int64_t>::max();
  for (const auto& [p, w] : contamination.atoms()) margin = std::min(margin, window.distance(p));
  return margin;
}

void require_margin(const MarginReport& r) {
  if (r.margin >= 1) return;
  throw InsufficientTruncation(
      r.sufficient_half_width,
      "truncation N = " + std::to_string(r.half_width) + " contaminates the window " +
          r.output_window.str() + "; required N > " + std::to_string(2 * r.support_radius + 2));
}

}  // namespace

Reconstruction reconstruct(const LatticeSignal& f, const AtomicMeasure& kernel,
                           const TruncatedSeries& inverse) {
  if (!(kernel.dimension() == inverse.kernel.dimension() && kernel.mode() == inverse.kernel.mode() &&
        kernel == inverse.kernel))
    throw UnsupportedKernel("inverse series was built for kernel " + inverse.kernel.str() +
                            ", not " + kernel.str());
  const std::int64_t s = extent_radius(f.extent());
  const WindowSpec output = WindowSpec::centered(f.dimension(), s);
  AtomicMeasure contamination = convolve(f.to_measure(), inverse.boundary_residual);
  MarginReport report{s,
                      inverse.half_width(),
                      2 * s + 3,
                      contamination_margin(contamination, output),
                      std::move(contamination),
                      output};
  require_margin(report);
  const LatticeSignal observed = apply_to_signal(f, kernel);
  return {apply_to_signal(observed, inverse.measure, output), std::move(report)};
}

Reconstruction reconstruct_observed(const LatticeSignal& g, const WindowSpec& target,
                                    const TruncatedSeries& inverse) {
  // f is unknown; assume it fills `target` and bound the contamination by
  // the indicator of the target window.
  const LatticeSignal indicator(target, std::vector<Scalar>(target.volume(), Scalar::one(g.mode())));
  AtomicMeasure footprint = convolve(indicator.to_measure(), inverse.boundary_residual);
  const std::int64_t s = extent_radius(target);
  MarginReport report{s,
                      inverse.half_width(),
                      2 * s + 3,
                      contamination_margin(footprint, target),
                      std::move(footprint),
                      target};
  require_margin(report);
  return {apply_to_signal(g, inverse.measure, target), std::move(report)};
}

AmplificationReport noise_amplification(const LatticeSignal& f, const AtomicMeasure& kernel,
                                        const TruncatedSeries& inverse, const Scalar& eps,
                                        const LatticePoint& site) {
  const Reconstruction clean = reconstruct(f, kernel, inverse);

  const LatticeSignal observed = apply_to_signal(f, kernel);
  const AtomicMeasure perturbed_atoms = observed.to_measure() + dirac(site, eps);
  const WindowSpec extent = observed.extent().hull(WindowSpec::at(site));
  const LatticeSignal perturbed = LatticeSignal::from_measure(perturbed_atoms, extent);

  const AtomicMeasure full_clean = apply_to_signal(observed, inverse.measure).to_measure();
  const AtomicMeasure full_noisy = apply_to_signal(perturbed, inverse.measure).to_measure();
  const AtomicMeasure deviation = full_noisy - full_clean;

  AmplificationReport report{inverse.half_width(), clean.report.margin, Scalar::zero(eps.mode()),
                             eps.abs() * inverse.measure.max_abs_weight(), site};
  for (const auto& [p, w] : deviation.atoms()) {
    if (w.abs() > report.max_deviation) {
      report.max_deviation = w.abs();
      report.argmax = p;
    }
  }
  return report;
}

}  // namespace deconv::lateral
