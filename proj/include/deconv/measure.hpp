#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deconv/scalar.hpp"

namespace deconv {

/// Integer point of Z^d, d in {1, 2}.
class LatticePoint {
 public:
  LatticePoint() = default;
  LatticePoint(std::int64_t i) : coords_{i, 0}, dim_(1) {}  // NOLINT: 1D points read naturally as integers
  LatticePoint(std::int64_t i, std::int64_t j) : coords_{i, j}, dim_(2) {}

  static LatticePoint origin(int dim);

  int dimension() const noexcept { return dim_; }
  std::int64_t operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }

  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-(const LatticePoint& o) const;
  LatticePoint operator-() const;

  /// max |coordinate|.
  std::int64_t chebyshev_norm() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

  std::string str() const;

 private:
  std::array<std::int64_t, 2> coords_{0, 0};
  int dim_ = 1;
};

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t length() const { return hi - lo + 1; }
};

/// Closed axis-aligned box of lattice points.
class WindowSpec {
 public:
  explicit WindowSpec(std::vector<Interval> axes);

  static WindowSpec interval(std::int64_t lo, std::int64_t hi) { return WindowSpec({{lo, hi}}); }
  static WindowSpec box(Interval x, Interval y) { return WindowSpec({x, y}); }
  /// [-half, half]^d
  static WindowSpec centered(int dim, std::int64_t half);
  /// The single point p.
  static WindowSpec at(const LatticePoint& p);

  int dimension() const noexcept { return static_cast<int>(axes_.size()); }
  const Interval& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  bool contains(const LatticePoint& p) const;
  /// Number of lattice points in the box.
  std::size_t volume() const;
  /// Chebyshev distance from p to the box (0 when inside).
  std::int64_t distance(const LatticePoint& p) const;
  /// Smallest box containing both.
  WindowSpec hull(const WindowSpec& other) const;
  /// Minkowski sum of the two boxes.
  WindowSpec sum(const WindowSpec& other) const;

  friend bool operator==(const WindowSpec&, const WindowSpec&);

  std::string str() const;

 private:
  std::vector<Interval> axes_;
};

using Atom = std::pair<LatticePoint, Scalar>;

/// Finite signed measure on Z^d: a sparse map from lattice points to
/// non-zero weights sharing one arithmetic mode.
///
/// Values are immutable; every operation returns a new measure. Atoms whose
/// weight is exactly zero are never stored.
class AtomicMeasure {
 public:
  using AtomMap = std::map<LatticePoint, Scalar>;

  /// Empty (zero) measure.
  AtomicMeasure(int dim, Arithmetic mode);
  /// Duplicate points are summed, zeros pruned.
  AtomicMeasure(int dim, Arithmetic mode, const std::vector<Atom>& atoms);
  AtomicMeasure(int dim, Arithmetic mode, std::initializer_list<Atom> atoms)
      : AtomicMeasure(dim, mode, std::vector<Atom>(atoms)) {}

  int dimension() const noexcept { return dim_; }
  Arithmetic mode() const noexcept { return mode_; }
  const AtomMap& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  /// Weight at p, zero when p carries no atom.
  Scalar weight(const LatticePoint& p) const;
  std::optional<WindowSpec> bounding_box() const;
  Scalar max_abs_weight() const;

  AtomicMeasure restricted(const WindowSpec& window) const;
  /// Atoms outside the window.
  AtomicMeasure excluded(const WindowSpec& window) const;
  AtomicMeasure translated(const LatticePoint& shift) const;
  /// x -> -x
  AtomicMeasure reflected() const;
  AtomicMeasure as(Arithmetic mode) const;

  /// Atom-for-atom equality. Comparing measures of different mode or
  /// dimension is an error.
  friend bool operator==(const AtomicMeasure& a, const AtomicMeasure& b);

  std::string str() const;

 private:
  AtomicMeasure(int dim, Arithmetic mode, AtomMap atoms);

  friend AtomicMeasure add(const AtomicMeasure&, const AtomicMeasure&);
  friend AtomicMeasure scale(const AtomicMeasure&, const Scalar&);
  friend AtomicMeasure convolve(const AtomicMeasure&, const AtomicMeasure&);

  int dim_;
  Arithmetic mode_;
  AtomMap atoms_;
};

AtomicMeasure dirac(const LatticePoint& point, const Scalar& weight);
/// Unit Dirac at the origin.
AtomicMeasure unit(int dim, Arithmetic mode);

AtomicMeasure add(const AtomicMeasure& a, const AtomicMeasure& b);
AtomicMeasure subtract(const AtomicMeasure& a, const AtomicMeasure& b);
AtomicMeasure scale(const AtomicMeasure& a, const Scalar& c);

inline AtomicMeasure operator+(const AtomicMeasure& a, const AtomicMeasure& b) { return add(a, b); }
inline AtomicMeasure operator-(const AtomicMeasure& a, const AtomicMeasure& b) { return subtract(a, b); }
inline AtomicMeasure operator*(const Scalar& c, const AtomicMeasure& a) { return scale(a, c); }

/// Sum of absolute weights.
Scalar total_variation(const AtomicMeasure& a);

AtomicMeasure convolve(const AtomicMeasure& a, const AtomicMeasure& b);
/// n-fold convolution power; power(a, 0) is the unit.
AtomicMeasure power(const AtomicMeasure& a, unsigned n);

/// Tensor product of two 1D measures: (i, j) -> a(i) * b(j).
AtomicMeasure tensor_product(const AtomicMeasure& a, const AtomicMeasure& b);

struct InverseReport {
  bool holds = false;
  /// Atoms of t*v - delta_0 inside / outside the window.
  AtomicMeasure residual_inside;
  AtomicMeasure residual_outside;
  Scalar max_inside;

  explicit operator bool() const noexcept { return holds; }
};

/// Windowed check of t * v = delta_0.
InverseReport is_inverse(const AtomicMeasure& t, const AtomicMeasure& v, const WindowSpec& window,
                         const Scalar& tol);

/// Windowed check of t * d = 0 for non-zero t and d.
bool is_zero_divisor_pair(const AtomicMeasure& t, const AtomicMeasure& d, const WindowSpec& window,
                          const Scalar& tol);

/// Default absolute tolerance on residual weights: 0 in exact mode, 1e-9 in
/// float mode.
Scalar default_tolerance(Arithmetic mode);

/// Finitely supported function on Z^d stored densely over a box.
class LatticeSignal {
 public:
  /// All-zero signal over the window.
  LatticeSignal(const WindowSpec& extent, Arithmetic mode);
  /// Row-major values (last axis fastest).
  LatticeSignal(const WindowSpec& extent, std::vector<Scalar> values);

  static LatticeSignal from_measure(const AtomicMeasure& m, const WindowSpec& extent);

  int dimension() const noexcept { return extent_.dimension(); }
  Arithmetic mode() const noexcept { return mode_; }
  const WindowSpec& extent() const noexcept { return extent_; }
  const std::vector<Scalar>& values() const noexcept { return values_; }

  /// Value at p; zero outside the extent.
  Scalar at(const LatticePoint& p) const;
  /// Sparse view of the non-zero samples.
  AtomicMeasure to_measure() const;
  /// Values over another window, zero-filled where this signal is undefined.
  LatticeSignal resampled(const WindowSpec& window) const;
  /// Smallest box containing the non-zero samples, if any.
  std::optional<WindowSpec> support() const;

  /// Equal as functions on Z^d (zeros outside the stored extents).
  bool same_function(const LatticeSignal& other) const;
  /// max |this - other| over the union of extents.
  Scalar max_abs_difference(const LatticeSignal& other) const;

  std::vector<LatticePoint> points() const;

 private:
  std::size_t offset(const LatticePoint& p) const;

  WindowSpec extent_;
  Arithmetic mode_;
  std::vector<Scalar> values_;
};

/// (f * m)(p) = sum_q f(p - q) m(q) over the full grown support.
LatticeSignal apply_to_signal(const LatticeSignal& f, const AtomicMeasure& m);
/// Same sum evaluated only on `window`.
LatticeSignal apply_to_signal(const LatticeSignal& f, const AtomicMeasure& m,
                              const WindowSpec& window);

}  // namespace deconv
