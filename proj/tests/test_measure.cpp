#include <gtest/gtest.h>

#include "deconv/errors.hpp"
#include "deconv/measure.hpp"
#include "support.hpp"

using namespace deconv;
using testing_support::Gen;

namespace {

const Arithmetic E = Arithmetic::Exact;

Scalar q(std::int64_t p, std::int64_t d = 1) { return Scalar::exact(p, d); }

AtomicMeasure m1(std::initializer_list<std::pair<std::int64_t, Scalar>> atoms) {
  std::vector<Atom> v;
  for (const auto& [i, w] : atoms) v.emplace_back(LatticePoint(i), w);
  return AtomicMeasure(1, E, v);
}

}  // namespace

TEST(Measure, ZeroWeightsArePrunedAndDuplicatesSummed) {
  const AtomicMeasure m(1, E, {{0, q(1)}, {0, q(-1)}, {2, q(1, 2)}, {2, q(1, 2)}, {5, q(0)}});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.weight(2), q(1));
  EXPECT_EQ(m.weight(0), q(0));
}

TEST(Measure, FactorizationDisplay) {
  const AtomicMeasure back = m1({{-1, q(1)}, {0, q(1)}});
  const AtomicMeasure fwd = m1({{0, q(1)}, {1, q(1)}});
  EXPECT_EQ(convolve(back, fwd), m1({{-1, q(1)}, {0, q(2)}, {1, q(1)}}));
}

TEST(Measure, UnitIsNeutral) {
  Gen gen(7);
  for (int i = 0; i < 50; ++i) {
    const AtomicMeasure m = gen.measure(i % 2 + 1, E);
    EXPECT_EQ(convolve(unit(m.dimension(), E), m), m);
    EXPECT_EQ(convolve(m, unit(m.dimension(), E)), m);
  }
}

TEST(Measure, PowerOfUnitPairIsBinomialRow) {
  const AtomicMeasure pair = m1({{0, q(1)}, {1, q(1)}});
  EXPECT_EQ(power(pair, 4), m1({{0, q(1)}, {1, q(4)}, {2, q(6)}, {3, q(4)}, {4, q(1)}}));
  EXPECT_EQ(power(pair, 0), unit(1, E));
}

TEST(Measure, ConvolutionMatchesDefinition) {
  Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const AtomicMeasure a = gen.measure(1, E, 8, 6);
    const AtomicMeasure b = gen.measure(1, E, 8, 6);
    EXPECT_EQ(testing_support::to_map(convolve(a, b)),
              testing_support::brute_convolve(testing_support::to_map(a), testing_support::to_map(b)));
  }
}

TEST(Measure, ConvolutionIsCommutativeAssociativeAndBilinear) {
  Gen gen(12);
  for (int i = 0; i < 100; ++i) {
    const int d = i % 2 + 1;
    const AtomicMeasure a = gen.measure(d, E);
    const AtomicMeasure b = gen.measure(d, E);
    const AtomicMeasure c = gen.measure(d, E);
    const Scalar k = gen.weight(E);
    EXPECT_EQ(convolve(a, b), convolve(b, a));
    EXPECT_EQ(convolve(convolve(a, b), c), convolve(a, convolve(b, c)));
    EXPECT_EQ(convolve(a, b + c), convolve(a, b) + convolve(a, c));
    EXPECT_EQ(convolve(k * a, b), k * convolve(a, b));
  }
}

TEST(Measure, TotalVariationIsSubmultiplicative) {
  Gen gen(13);
  for (int i = 0; i < 200; ++i) {
    const int d = i % 2 + 1;
    const AtomicMeasure a = gen.measure(d, E);
    const AtomicMeasure b = gen.measure(d, E);
    EXPECT_LE(total_variation(convolve(a, b)), total_variation(a) * total_variation(b));
    EXPECT_LE(total_variation(a + b), total_variation(a) + total_variation(b));
  }
}

TEST(Measure, TotalVariationOfPositiveMeasuresIsMultiplicative) {
  const AtomicMeasure a = m1({{-1, q(1, 3)}, {2, q(1, 5)}});
  const AtomicMeasure b = m1({{0, q(2)}, {1, q(1, 7)}});
  EXPECT_EQ(total_variation(convolve(a, b)), total_variation(a) * total_variation(b));
}

TEST(Measure, FloatConvolutionTracksExact) {
  Gen gen(14);
  for (int i = 0; i < 50; ++i) {
    const AtomicMeasure a = gen.measure(1, E);
    const AtomicMeasure b = gen.measure(1, E);
    const AtomicMeasure exact = convolve(a, b);
    const AtomicMeasure approx = convolve(a.as(Arithmetic::Float), b.as(Arithmetic::Float));
    const AtomicMeasure diff = approx - exact.as(Arithmetic::Float);
    EXPECT_LE(diff.max_abs_weight().to_double(), 1e-12);
  }
}

TEST(Measure, OperandsMustAgree) {
  const AtomicMeasure a(1, E, {{0, q(1)}});
  const AtomicMeasure b(2, E, {{LatticePoint(0, 0), q(1)}});
  EXPECT_THROW(convolve(a, b), DimensionMismatch);
  EXPECT_THROW(convolve(a, a.as(Arithmetic::Float)), ModeMismatch);
  EXPECT_THROW(AtomicMeasure(1, E, {{LatticePoint(0, 0), q(1)}}), DimensionMismatch);
  EXPECT_THROW(AtomicMeasure(1, E, {{0, Scalar::real(1.0)}}), ModeMismatch);
  EXPECT_THROW(AtomicMeasure(3, E), InvalidArgument);
}

TEST(Measure, TensorProductFactorsConvolution) {
  Gen gen(15);
  for (int i = 0; i < 30; ++i) {
    const AtomicMeasure a = gen.measure(1, E), b = gen.measure(1, E);
    const AtomicMeasure c = gen.measure(1, E), d = gen.measure(1, E);
    EXPECT_EQ(convolve(tensor_product(a, b), tensor_product(c, d)),
              tensor_product(convolve(a, c), convolve(b, d)));
  }
  const AtomicMeasure t = tensor_product(m1({{1, q(2)}}), m1({{-3, q(5)}}));
  EXPECT_EQ(t.weight(LatticePoint(1, -3)), q(10));
}

TEST(Measure, TranslationAndReflection) {
  const AtomicMeasure m = m1({{1, q(2)}, {3, q(-1)}});
  EXPECT_EQ(m.translated(2), m1({{3, q(2)}, {5, q(-1)}}));
  EXPECT_EQ(m.reflected(), m1({{-1, q(2)}, {-3, q(-1)}}));
  EXPECT_EQ(convolve(m, dirac(4, q(1))), m.translated(4));
}

TEST(Measure, RestrictedAndExcludedPartitionTheMeasure) {
  Gen gen(16);
  for (int i = 0; i < 50; ++i) {
    const AtomicMeasure m = gen.measure(2, E, 10, 5);
    const WindowSpec w = WindowSpec::centered(2, 2);
    const AtomicMeasure in = m.restricted(w), out = m.excluded(w);
    EXPECT_EQ(in + out, m);
    for (const auto& [p, x] : in.atoms()) EXPECT_TRUE(w.contains(p));
    for (const auto& [p, x] : out.atoms()) EXPECT_FALSE(w.contains(p));
  }
}

TEST(Measure, BoundingBox) {
  EXPECT_FALSE(AtomicMeasure(1, E).bounding_box().has_value());
  const AtomicMeasure m(2, E, {{LatticePoint(-1, 4), q(1)}, {LatticePoint(3, 0), q(1)}});
  EXPECT_EQ(*m.bounding_box(), WindowSpec::box({-1, 3}, {0, 4}));
}

TEST(Window, Geometry) {
  const WindowSpec w = WindowSpec::interval(-2, 3);
  EXPECT_EQ(w.volume(), 6u);
  EXPECT_EQ(w.distance(5), 2);
  EXPECT_EQ(w.distance(-4), 2);
  EXPECT_EQ(w.distance(0), 0);
  EXPECT_EQ(w.sum(WindowSpec::interval(-1, 1)), WindowSpec::interval(-3, 4));
  EXPECT_EQ(w.hull(WindowSpec::at(7)), WindowSpec::interval(-2, 7));
  EXPECT_THROW(WindowSpec::interval(2, 1), InvalidArgument);
  EXPECT_EQ(WindowSpec::centered(2, 1).volume(), 9u);
}

TEST(Inverse, WindowedCheckReportsBothSides) {
  // (delta_0 + delta_1) * (delta_0 - delta_1 + delta_2) = delta_0 + delta_3
  const AtomicMeasure t = m1({{0, q(1)}, {1, q(1)}});
  const AtomicMeasure v = m1({{0, q(1)}, {1, q(-1)}, {2, q(1)}});
  const auto inside = is_inverse(t, v, WindowSpec::interval(-2, 2), q(0));
  EXPECT_TRUE(inside.holds);
  EXPECT_TRUE(inside.residual_inside.empty());
  EXPECT_EQ(inside.residual_outside, m1({{3, q(1)}}));
  const auto wide = is_inverse(t, v, WindowSpec::interval(-2, 3), q(0));
  EXPECT_FALSE(wide.holds);
  EXPECT_EQ(wide.max_inside, q(1));
  EXPECT_THROW(is_inverse(t, v, WindowSpec::interval(1, 2), q(0)), InvalidArgument);
}

TEST(Inverse, ZeroDivisorPair) {
  const AtomicMeasure t = m1({{0, q(1)}, {1, q(1)}});
  const AtomicMeasure d = m1({{0, q(1)}, {1, q(-1)}, {2, q(1)}, {3, q(-1)}});
  // t * d = delta_0 - delta_4
  EXPECT_FALSE(is_zero_divisor_pair(t, d, WindowSpec::interval(0, 3), q(0)));
  EXPECT_TRUE(is_zero_divisor_pair(t, d, WindowSpec::interval(1, 3), q(0)));
  EXPECT_THROW(is_zero_divisor_pair(t, AtomicMeasure(1, E), WindowSpec::interval(0, 1), q(0)),
               InvalidArgument);
}

TEST(Inverse, DefaultTolerance) {
  EXPECT_EQ(default_tolerance(E), q(0));
  EXPECT_EQ(default_tolerance(Arithmetic::Float), Scalar::real(1e-9));
}

TEST(Signal, ApplyMatchesMeasureConvolution) {
  Gen gen(17);
  for (int i = 0; i < 50; ++i) {
    const LatticeSignal f = gen.int_signal(E, 5);
    const AtomicMeasure k = gen.nonzero_measure(1, E);
    const LatticeSignal g = apply_to_signal(f, k);
    EXPECT_EQ(g.to_measure(), convolve(f.to_measure(), k));
    const WindowSpec w = WindowSpec::interval(-2, 2);
    EXPECT_EQ(apply_to_signal(f, k, w).to_measure(), convolve(f.to_measure(), k).restricted(w));
  }
}

TEST(Signal, AccessAndComparison) {
  const LatticeSignal s(WindowSpec::interval(-1, 1), {q(1), q(0), q(2)});
  EXPECT_EQ(s.at(-1), q(1));
  EXPECT_EQ(s.at(7), q(0));
  EXPECT_EQ(*s.support(), WindowSpec::interval(-1, 1));
  const LatticeSignal wider = s.resampled(WindowSpec::interval(-3, 3));
  EXPECT_TRUE(wider.same_function(s));
  EXPECT_EQ(wider.values().size(), 7u);
  const LatticeSignal other(WindowSpec::interval(0, 2), {q(0), q(2), q(5)});
  EXPECT_EQ(s.max_abs_difference(other), q(5));
  EXPECT_THROW(LatticeSignal(WindowSpec::interval(0, 1), {q(1)}), InvalidArgument);
}

TEST(Signal, TwoDimensionalLayoutIsRowMajor) {
  const LatticeSignal s(WindowSpec::box({0, 1}, {0, 2}), {q(1), q(2), q(3), q(4), q(5), q(6)});
  EXPECT_EQ(s.at(LatticePoint(0, 2)), q(3));
  EXPECT_EQ(s.at(LatticePoint(1, 0)), q(4));
}
