#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "deconv/measure.hpp"

namespace testing_support {

using deconv::Arithmetic;
using deconv::AtomicMeasure;
using deconv::LatticePoint;
using deconv::Scalar;

/// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  /// p/q with |p| <= 9 and 1 <= q <= 6.
  mpq_class rational() {
    mpq_class q(static_cast<long>(integer(-9, 9)), static_cast<unsigned long>(integer(1, 6)));
    q.canonicalize();
    return q;
  }

  Scalar weight(Arithmetic mode) {
    const mpq_class q = rational();
    return mode == Arithmetic::Exact ? Scalar::exact(q) : Scalar::real(q.get_d());
  }

  AtomicMeasure measure(int dim, Arithmetic mode, int max_atoms = 6, std::int64_t radius = 4) {
    std::vector<deconv::Atom> atoms;
    const auto n = integer(1, max_atoms);
    for (std::int64_t k = 0; k < n; ++k) {
      const LatticePoint p = dim == 1 ? LatticePoint(integer(-radius, radius))
                                      : LatticePoint(integer(-radius, radius), integer(-radius, radius));
      atoms.emplace_back(p, weight(mode));
    }
    return AtomicMeasure(dim, mode, atoms);
  }

  /// Measure with at least one non-zero atom.
  AtomicMeasure nonzero_measure(int dim, Arithmetic mode, int max_atoms = 6, std::int64_t radius = 4) {
    for (;;) {
      AtomicMeasure m = measure(dim, mode, max_atoms, radius);
      if (!m.empty()) return m;
    }
  }

  /// Integer-valued 1D signal on [-radius, radius].
  deconv::LatticeSignal int_signal(Arithmetic mode, std::int64_t radius, std::int64_t amp = 9) {
    std::vector<Scalar> v;
    for (std::int64_t i = -radius; i <= radius; ++i) v.push_back(Scalar::integer(mode, integer(-amp, amp)));
    return deconv::LatticeSignal(deconv::WindowSpec::interval(-radius, radius), std::move(v));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Convolution by the definition, on plain maps of rationals.
inline std::map<std::int64_t, mpq_class> brute_convolve(const std::map<std::int64_t, mpq_class>& a,
                                                        const std::map<std::int64_t, mpq_class>& b) {
  std::map<std::int64_t, mpq_class> out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) out[i + j] += x * y;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline std::map<std::int64_t, mpq_class> to_map(const AtomicMeasure& m) {
  std::map<std::int64_t, mpq_class> out;
  for (const auto& [p, w] : m.atoms()) out[p[0]] = w.rational();
  return out;
}

}  // namespace testing_support
