// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "deconv/cli.hpp"
#include "deconv/gaussian.hpp"
#include "deconv/io.hpp"
#include "deconv/lateral.hpp"
#include "deconv/neumann.hpp"
#include "support.hpp"

using namespace deconv;

namespace {

const Arithmetic E = Arithmetic::Exact;

Scalar q(std::int64_t p, std::int64_t d = 1) { return Scalar::exact(p, d); }

/// Collects failures for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool passed() const { return count_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(count_) + " failure(s)";
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }
  std::string note;

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

void residual_identity(Check& c) {
  for (const auto& a : {q(3, 5), q(3, 4), q(9, 10)}) {
    const Scalar coeff = (q(1) - a) / (q(2) * a);
    const AtomicMeasure mu(1, E, {{-1, coeff}, {1, coeff}});
    const Scalar ratio = (q(1) - a) / a;
    for (unsigned n = 1; n <= 12; ++n) {
      const auto r = neumann::neumann_inverse(mu, neumann::NeumannConfig::fixed_order(n));
      const AtomicMeasure defect = convolve(unit(1, E) + mu, r.inverse) - unit(1, E);
      const AtomicMeasure expected = scale(power(mu, n + 1), q(n % 2 == 0 ? 1 : -1));
      const std::string tag = "a=" + a.str() + " n=" + std::to_string(n);
      c.expect(defect == expected, tag + ": residual differs from signed next power");
      c.expect(total_variation(defect) <= ratio.pow(n + 1), tag + ": TV above bound");
    }
  }
}

void symmetric_inverse_exact(Check& c) {
  testing_support::Gen gen(20260101);
  const std::int64_t n = 50;
  const auto exact = lateral::binomial_inverse(n);
  const auto approx = lateral::binomial_inverse(n, Arithmetic::Float);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const LatticeSignal f = gen.int_signal(E, 10);
    const auto r = lateral::reconstruct(f, lateral::binomial_kernel(), exact);
    c.expect(r.recovered.same_function(f) && r.recovered.extent() == WindowSpec::interval(-10, 10),
             "exact case " + std::to_string(i));
    std::vector<Scalar> fv;
    for (const auto& v : f.values()) fv.push_back(v.as(Arithmetic::Float));
    const LatticeSignal ff(f.extent(), fv);
    const auto rf = lateral::reconstruct(ff, lateral::binomial_kernel(Arithmetic::Float), approx);
    worst = std::max(worst, rf.recovered.max_abs_difference(ff).to_double());
  }
  c.expect(worst <= 1e-9 * (1 + 2 * n), "float error " + io::format_double(worst));
  c.note = "float max error " + io::format_double(worst);
}

void series_genealogy(Check& c) {
  using lateral::Side;
  const std::int64_t n = 100;
  const auto right = lateral::cauchy_product(lateral::unit_pair_inverse(lateral::forward_pair(), Side::Right, n),
                                             lateral::unit_pair_inverse(lateral::backward_pair(), Side::Right, n));
  const auto left = lateral::cauchy_product(lateral::unit_pair_inverse(lateral::forward_pair(), Side::Left, n),
                                            lateral::unit_pair_inverse(lateral::backward_pair(), Side::Left, n));
  for (std::int64_t k = 1; k <= n - 1; ++k) {
    const Scalar expected = q(k % 2 ? k : -k);
    c.expect(right.measure.weight(k) == expected, "right k=" + std::to_string(k));
    c.expect(left.measure.weight(-k) == expected, "left k=" + std::to_string(k));
  }
  const AtomicMeasure four_half_sum = scale(right.measure + left.measure, q(2));
  const WindowSpec interior = WindowSpec::interval(-(n - 1), n - 1);
  c.expect(four_half_sum.restricted(interior) == lateral::binomial_inverse(n).measure.restricted(interior),
           "4 x half-sum differs from the symmetric inverse");
}

void zero_divisors(Check& c) {
  const std::int64_t n = 100;
  const AtomicMeasure mu = lateral::binomial_kernel();
  const AtomicMeasure v1 = lateral::one_sided_binomial_inverse(lateral::Side::Right, n).measure;
  const AtomicMeasure v2 = lateral::binomial_inverse(n).measure;
  const WindowSpec w = WindowSpec::interval(-n / 2, n / 2);
  c.expect(is_zero_divisor_pair(mu, v2 - v1, w, q(0)), "V2 - V1 is not a zero divisor on the window");
  for (const auto& lambda : {q(-1), q(1, 2), q(2)}) {
    const AtomicMeasure mix = lambda * v1 + (q(1) - lambda) * v2;
    c.expect(is_inverse(mu, mix, w, q(0)).holds, "mixture lambda=" + lambda.str());
  }
}

void half_pair(Check& c) {
  for (const std::int64_t n : {10, 100}) {
    const auto s = lateral::half_pair_inverse(n);
    const AtomicMeasure defect = convolve(lateral::half_pair_kernel(), s.measure) - unit(1, E);
    const WindowSpec interior = WindowSpec::interval(-(n - 1), n - 1);
    const AtomicMeasure inside = defect.restricted(interior);
    c.expect(inside.empty(), "N=" + std::to_string(n) + " interior residual " +
                                 (inside.empty() ? "0" : inside.max_abs_weight().str()));
    c.expect(defect == s.boundary_residual, "N=" + std::to_string(n) + " boundary set mismatch");
  }
}

void van_cittert(Check& c) {
  testing_support::Gen gen(77);
  for (int i = 0; i < 20; ++i) {
    const Scalar w = Scalar::exact(gen.integer(1, 4), 10);
    const AtomicMeasure mu(1, E, {{-1, w}, {1, w}});
    const LatticeSignal g = gen.int_signal(E, gen.integer(0, 6));
    const unsigned n = static_cast<unsigned>(gen.integer(0, 10));
    const auto iterates = neumann::van_cittert_deblur(g, mu, n);
    const AtomicMeasure nu = neumann::neumann_inverse(mu, neumann::NeumannConfig::fixed_order(n)).inverse;
    c.expect(iterates.back().to_measure() == convolve(nu, g.to_measure()), "case " + std::to_string(i));
  }
}

void gaussian_round_trip(Check& c) {
  const GridShape shape = GridShape::line(512, 0.05, 0.0);
  std::vector<double> v(shape.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double x = shape.axis(0).coordinate(k) - 12.8;
    v[k] = std::exp(-x * x / 8.0) * (1.0 + 0.3 * std::sin(x));
  }
  const GridSignal f(shape, v);
  const GridSignal g = gaussian::blur(f, 12.8);
  const auto& ax = g.shape().axis(0);
  c.expect(ax.count == 1024 && std::abs(ax.origin + 12.8) < 1e-9, "padded grid is " + g.shape().str());
  const auto r = gaussian::naive_deblur(g, gaussian::DeblurMode::DiscreteReciprocal);
  const double err = relative_l2_error(r.signal, f.on_grid(g.shape()));
  c.expect(err <= 1e-6, "relative L2 " + io::format_double(err));

  const auto spectrum = gaussian::dft_forward(gaussian::sample_gaussian(GridShape::centered(1, 0.05, 12.8)));
  double worst = 0.0;
  for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
    const double u = spectrum.frequency(0, k);
    if (std::abs(u) <= 6.0)
      worst = std::max(worst, static_cast<double>(std::abs(spectrum.values[k] - std::complex<long double>(
                                                                                   std::exp(-0.5 * u * u)))));
  }
  c.expect(worst <= 1e-4, "spectrum error " + io::format_double(worst));
  c.note = "relative L2 " + io::format_double(err) + ", spectrum error " + io::format_double(worst);
}

void ill_posedness(Check& c) {
  const GridSignal f = cli::noise_test_signal();
  const double pad = cli::kNoiseTestPadding;
  const auto b4 = gaussian::noise_blowup_experiment(f, 1e-12, 1, 4.0, pad);
  const auto b8 = gaussian::noise_blowup_experiment(f, 1e-12, 1, 8.0, pad);
  const double growth = b8.row.observed_error / b4.row.observed_error / std::exp(24.0);
  c.expect(growth >= 0.1 && growth <= 10.0, "growth / e^24 = " + io::format_double(growth));

  const auto s1 = gaussian::noise_blowup_experiment(f, 1e-12, 1, 8.0, pad);
  const auto s2 = gaussian::noise_blowup_experiment(f, 2e-12, 1, 8.0, pad);
  const auto s10 = gaussian::noise_blowup_experiment(f, 1e-11, 1, 8.0, pad);
  const double r2 = s2.row.observed_error / s1.row.observed_error / 2.0;
  const double r10 = s10.row.observed_error / s1.row.observed_error / 10.0;
  c.expect(std::abs(r2 - 1.0) <= 0.05, "sigma x2 gives x" + io::format_double(2 * r2));
  c.expect(std::abs(r10 - 1.0) <= 0.05, "sigma x10 gives x" + io::format_double(10 * r10));
  c.note = "growth / e^24 = " + io::format_double(growth);
}

void growth_table(Check& c) {
  const auto path = std::filesystem::temp_directory_path() / "deconv_acceptance_growth.csv";
  std::ostringstream out, err;
  const int code = cli::run({"experiment", "growth", "-o", path.string()}, out, err);
  c.expect(code == 0, "exit " + std::to_string(code) + ": " + err.str());
  if (code != 0) return;
  std::istringstream in(io::slurp(path));
  std::filesystem::remove(path);
  std::vector<std::int64_t> seen;
  bool header = true;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::int64_t n = 0, max_abs = 0;
    if (std::sscanf(line.c_str(), "%ld,%ld", &n, &max_abs) != 2) {
      c.expect(false, "unreadable row '" + line + "'");
      continue;
    }
    c.expect(max_abs == 2 * n, "N=" + std::to_string(n) + " max " + std::to_string(max_abs));
    seen.push_back(n);
  }
  std::vector<std::int64_t> all;
  for (std::int64_t n = 10; n <= 100; ++n) all.push_back(n);
  c.expect(seen == all, "rows do not cover N = 10..100");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"neumann residual identity and TV bound", residual_identity},
      {"symmetric binomial inverse recovers f (exact and float)", symmetric_inverse_exact},
      {"cauchy product coefficients and half-sum", series_genealogy},
      {"zero divisors and affine family of inverses", zero_divisors},
      {"half-pair inverse has boundary-only residual", half_pair},
      {"van cittert iterates equal partial sums applied to g", van_cittert},
      {"gaussian round trip and kernel spectrum", gaussian_round_trip},
      {"noise amplification growth and linearity", ill_posedness},
      {"growth sweep reports max coefficient 2N", growth_table},
  };
  bool all_passed = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    std::string detail;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    if (c.passed()) {
      detail = c.note;
    } else {
      detail = c.summary();
      all_passed = false;
    }
    std::cout << (c.passed() ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  }
  return all_passed ? 0 : 1;
}
