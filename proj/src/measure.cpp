#include "deconv/measure.hpp"

#include <algorithm>
#include <sstream>

#include "deconv/errors.hpp"

namespace deconv {

namespace {

void require_dimension(int a, int b) {
  if (a != b)
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " +
                            std::to_string(b));
}

void require_compatible(const AtomicMeasure& a, const AtomicMeasure& b) {
  require_dimension(a.dimension(), b.dimension());
  if (a.mode() != b.mode())
    throw ModeMismatch("arithmetic mode mismatch: " + std::string(to_string(a.mode())) + " vs " +
                       std::string(to_string(b.mode())));
}

void accumulate(AtomicMeasure::AtomMap& atoms, const LatticePoint& p, const Scalar& w) {
  auto [it, inserted] = atoms.try_emplace(p, w);
  if (!inserted) it->second += w;
}

void prune(AtomicMeasure::AtomMap& atoms) {
  std::erase_if(atoms, [](const auto& kv) { return kv.second.is_zero(); });
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticePoint

LatticePoint LatticePoint::origin(int dim) {
  if (dim == 1) return LatticePoint(0);
  if (dim == 2) return LatticePoint(0, 0);
  throw InvalidArgument("lattice dimension must be 1 or 2, got " + std::to_string(dim));
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  require_dimension(dim_, o.dim_);
  LatticePoint r = *this;
  r.coords_[0] += o.coords_[0];
  r.coords_[1] += o.coords_[1];
  return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const { return *this + (-o); }

LatticePoint LatticePoint::operator-() const {
  LatticePoint r = *this;
  r.coords_[0] = -r.coords_[0];
  r.coords_[1] = -r.coords_[1];
  return r;
}

std::int64_t LatticePoint::chebyshev_norm() const {
  std::int64_t n = 0;
  for (int a = 0; a < dim_; ++a) n = std::max(n, coords_[static_cast<std::size_t>(a)] < 0
                                                     ? -coords_[static_cast<std::size_t>(a)]
                                                     : coords_[static_cast<std::size_t>(a)]);
  return n;
}

std::string LatticePoint::str() const {
  if (dim_ == 1) return std::to_string(coords_[0]);
  return "(" + std::to_string(coords_[0]) + "," + std::to_string(coords_[1]) + ")";
}

// ---------------------------------------------------------------------------
// WindowSpec

WindowSpec::WindowSpec(std::vector<Interval> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2)
    throw InvalidArgument("window must have 1 or 2 axes");
  for (const auto& ax : axes_)
    if (ax.lo > ax.hi)
      throw InvalidArgument("window axis has lo > hi: [" + std::to_string(ax.lo) + ", " +
                            std::to_string(ax.hi) + "]");
}

WindowSpec WindowSpec::centered(int dim, std::int64_t half) {
  std::vector<Interval> axes(static_cast<std::size_t>(dim), Interval{-half, half});
  if (dim < 1 || dim > 2) throw InvalidArgument("window dimension must be 1 or 2");
  return WindowSpec(std::move(axes));
}

WindowSpec WindowSpec::at(const LatticePoint& p) {
  if (p.dimension() == 1) return interval(p[0], p[0]);
  return box({p[0], p[0]}, {p[1], p[1]});
}

bool WindowSpec::contains(const LatticePoint& p) const {
  require_dimension(dimension(), p.dimension());
  for (int a = 0; a < dimension(); ++a)
    if (p[a] < axes_[static_cast<std::size_t>(a)].lo || p[a] > axes_[static_cast<std::size_t>(a)].hi)
      return false;
  return true;
}

std::size_t WindowSpec::volume() const {
  std::size_t v = 1;
  for (const auto& ax : axes_) v *= static_cast<std::size_t>(ax.length());
  return v;
}

std::int64_t WindowSpec::distance(const LatticePoint& p) const {
  require_dimension(dimension(), p.dimension());
  std::int64_t d = 0;
  for (int a = 0; a < dimension(); ++a) {
    const auto& ax = axes_[static_cast<std::size_t>(a)];
    if (p[a] < ax.lo) d = std::max(d, ax.lo - p[a]);
    if (p[a] > ax.hi) d = std::max(d, p[a] - ax.hi);
  }
  return d;
}

WindowSpec WindowSpec::hull(const WindowSpec& other) const {
  require_dimension(dimension(), other.dimension());
  std::vector<Interval> axes;
  for (int a = 0; a < dimension(); ++a)
    axes.push_back({std::min(axis(a).lo, other.axis(a).lo), std::max(axis(a).hi, other.axis(a).hi)});
  return WindowSpec(std::move(axes));
}

WindowSpec WindowSpec::sum(const WindowSpec& other) const {
  require_dimension(dimension(), other.dimension());
  std::vector<Interval> axes;
  for (int a = 0; a < dimension(); ++a)
    axes.push_back({axis(a).lo + other.axis(a).lo, axis(a).hi + other.axis(a).hi});
  return WindowSpec(std::move(axes));
}

bool operator==(const WindowSpec& a, const WindowSpec& b) {
  if (a.dimension() != b.dimension()) return false;
  for (int i = 0; i < a.dimension(); ++i)
    if (a.axis(i).lo != b.axis(i).lo || a.axis(i).hi != b.axis(i).hi) return false;
  return true;
}

std::string WindowSpec::str() const {
  std::string s;
  for (const auto& ax : axes_) {
    if (!s.empty()) s += "x";
    s += "[" + std::to_string(ax.lo) + "," + std::to_string(ax.hi) + "]";
  }
  return s;
}

// ---------------------------------------------------------------------------
// AtomicMeasure

AtomicMeasure::AtomicMeasure(int dim, Arithmetic mode) : dim_(dim), mode_(mode) {
  (void)LatticePoint::origin(dim);
}

AtomicMeasure::AtomicMeasure(int dim, Arithmetic mode, const std::vector<Atom>& atoms)
    : AtomicMeasure(dim, mode) {
  for (const auto& [p, w] : atoms) {
    require_dimension(dim, p.dimension());
    if (w.mode() != mode) throw ModeMismatch("atom weight mode differs from measure mode");
    accumulate(atoms_, p, w);
  }
  prune(atoms_);
}

AtomicMeasure::AtomicMeasure(int dim, Arithmetic mode, AtomMap atoms)
    : dim_(dim), mode_(mode), atoms_(std::move(atoms)) {
  prune(atoms_);
}

Scalar AtomicMeasure::weight(const LatticePoint& p) const {
  const auto it = atoms_.find(p);
  return it == atoms_.end() ? Scalar::zero(mode_) : it->second;
}

std::optional<WindowSpec> AtomicMeasure::bounding_box() const {
  if (atoms_.empty()) return std::nullopt;
  std::vector<Interval> axes(static_cast<std::size_t>(dim_));
  bool first = true;
  for (const auto& [p, w] : atoms_) {
    for (int a = 0; a < dim_; ++a) {
      auto& ax = axes[static_cast<std::size_t>(a)];
      if (first) {
        ax = {p[a], p[a]};
      } else {
        ax.lo = std::min(ax.lo, p[a]);
        ax.hi = std::max(ax.hi, p[a]);
      }
    }
    first = false;
  }
  return WindowSpec(std::move(axes));
}

Scalar AtomicMeasure::max_abs_weight() const {
  Scalar m = Scalar::zero(mode_);
  for (const auto& [p, w] : atoms_) m = std::max(m, w.abs(), [](const Scalar& x, const Scalar& y) { return x < y; });
  return m;
}

AtomicMeasure AtomicMeasure::restricted(const WindowSpec& window) const {
  AtomMap out;
  for (const auto& [p, w] : atoms_)
    if (window.contains(p)) out.emplace(p, w);
  return AtomicMeasure(dim_, mode_, std::move(out));
}

AtomicMeasure AtomicMeasure::excluded(const WindowSpec& window) const {
  AtomMap out;
  for (const auto& [p, w] : atoms_)
    if (!window.contains(p)) out.emplace(p, w);
  return AtomicMeasure(dim_, mode_, std::move(out));
}

AtomicMeasure AtomicMeasure::translated(const LatticePoint& shift) const {
  AtomMap out;
  for (const auto& [p, w] : atoms_) out.emplace(p + shift, w);
  return AtomicMeasure(dim_, mode_, std::move(out));
}

AtomicMeasure AtomicMeasure::reflected() const {
  AtomMap out;
  for (const auto& [p, w] : atoms_) out.emplace(-p, w);
  return AtomicMeasure(dim_, mode_, std::move(out));
}

AtomicMeasure AtomicMeasure::as(Arithmetic mode) const {
  AtomMap out;
  for (const auto& [p, w] : atoms_) out.emplace(p, w.as(mode));
  return AtomicMeasure(dim_, mode, std::move(out));
}

bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
  require_compatible(a, b);
  return a.atoms_ == b.atoms_;
}

std::string AtomicMeasure::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [p, w] : atoms_) {
    if (!first) os << ", ";
    os << p.str() << " -> " << w;
    first = false;
  }
  os << "}";
  return os.str();
}

AtomicMeasure dirac(const LatticePoint& point, const Scalar& weight) {
  return AtomicMeasure(point.dimension(), weight.mode(), {{point, weight}});
}

AtomicMeasure unit(int dim, Arithmetic mode) {
  return dirac(LatticePoint::origin(dim), Scalar::one(mode));
}

AtomicMeasure add(const AtomicMeasure& a, const AtomicMeasure& b) {
  require_compatible(a, b);
  AtomicMeasure::AtomMap out = a.atoms_;
  for (const auto& [p, w] : b.atoms_) accumulate(out, p, w);
  return AtomicMeasure(a.dim_, a.mode_, std::move(out));
}

AtomicMeasure subtract(const AtomicMeasure& a, const AtomicMeasure& b) {
  return add(a, scale(b, Scalar::integer(b.mode(), -1)));
}

AtomicMeasure scale(const AtomicMeasure& a, const Scalar& c) {
  if (c.mode() != a.mode_) throw ModeMismatch("scale factor mode differs from measure mode");
  AtomicMeasure::AtomMap out;
  if (!c.is_zero())
    for (const auto& [p, w] : a.atoms_) out.emplace(p, w * c);
  return AtomicMeasure(a.dim_, a.mode_, std::move(out));
}

Scalar total_variation(const AtomicMeasure& a) {
  Scalar tv = Scalar::zero(a.mode());
  for (const auto& [p, w] : a.atoms()) tv += w.abs();
  return tv;
}

AtomicMeasure convolve(const AtomicMeasure& a, const AtomicMeasure& b) {
  require_compatible(a, b);
  AtomicMeasure::AtomMap out;
  for (const auto& [p, wp] : a.atoms_)
    for (const auto& [q, wq] : b.atoms_) accumulate(out, p + q, wp * wq);
  return AtomicMeasure(a.dim_, a.mode_, std::move(out));
}

AtomicMeasure power(const AtomicMeasure& a, unsigned n) {
  AtomicMeasure result = unit(a.dimension(), a.mode());
  for (unsigned k = 0; k < n; ++k) result = convolve(result, a);
  return result;
}

AtomicMeasure tensor_product(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.dimension() != 1 || b.dimension() != 1)
    throw DimensionMismatch("tensor product needs two 1D measures");
  if (a.mode() != b.mode()) throw ModeMismatch("tensor product of measures with different modes");
  std::vector<Atom> atoms;
  atoms.reserve(a.size() * b.size());
  for (const auto& [p, wp] : a.atoms())
    for (const auto& [q, wq] : b.atoms()) atoms.emplace_back(LatticePoint(p[0], q[0]), wp * wq);
  return AtomicMeasure(2, a.mode(), atoms);
}

Scalar default_tolerance(Arithmetic mode) {
  return mode == Arithmetic::Exact ? Scalar::zero(mode) : Scalar::real(1e-9);
}

InverseReport is_inverse(const AtomicMeasure& t, const AtomicMeasure& v, const WindowSpec& window,
                         const Scalar& tol) {
  require_compatible(t, v);
  require_dimension(t.dimension(), window.dimension());
  if (!window.contains(LatticePoint::origin(t.dimension())))
    throw InvalidArgument("inverse check window " + window.str() + " does not cover the origin");
  const AtomicMeasure residual = convolve(t, v) - unit(t.dimension(), t.mode());
  InverseReport report{false, residual.restricted(window), residual.excluded(window),
                       Scalar::zero(t.mode())};
  report.max_inside = report.residual_inside.max_abs_weight();
  report.holds = report.max_inside <= tol;
  return report;
}

bool is_zero_divisor_pair(const AtomicMeasure& t, const AtomicMeasure& d, const WindowSpec& window,
                          const Scalar& tol) {
  require_compatible(t, d);
  if (t.empty() || d.empty()) throw InvalidArgument("zero divisor candidates must be non-zero");
  return convolve(t, d).restricted(window).max_abs_weight() <= tol;
}

// ---------------------------------------------------------------------------
// LatticeSignal

LatticeSignal::LatticeSignal(const WindowSpec& extent, Arithmetic mode)
    : extent_(extent), mode_(mode), values_(extent.volume(), Scalar::zero(mode)) {}

LatticeSignal::LatticeSignal(const WindowSpec& extent, std::vector<Scalar> values)
    : extent_(extent),
      mode_(values.empty() ? Arithmetic::Exact : values.front().mode()),
      values_(std::move(values)) {
  if (values_.size() != extent_.volume())
    throw InvalidArgument("signal has " + std::to_string(values_.size()) + " values for extent " +
                          extent_.str());
  for (const auto& v : values_)
    if (v.mode() != mode_) throw ModeMismatch("signal samples mix arithmetic modes");
}

LatticeSignal LatticeSignal::from_measure(const AtomicMeasure& m, const WindowSpec& extent) {
  LatticeSignal s(extent, m.mode());
  for (const auto& [p, w] : m.atoms()) {
    if (!extent.contains(p))
      throw InvalidArgument("atom at " + p.str() + " lies outside signal extent " + extent.str());
    s.values_[s.offset(p)] = w;
  }
  return s;
}

std::size_t LatticeSignal::offset(const LatticePoint& p) const {
  std::size_t idx = 0;
  for (int a = 0; a < dimension(); ++a) {
    const auto& ax = extent_.axis(a);
    idx = idx * static_cast<std::size_t>(ax.length()) + static_cast<std::size_t>(p[a] - ax.lo);
  }
  return idx;
}

Scalar LatticeSignal::at(const LatticePoint& p) const {
  if (!extent_.contains(p)) return Scalar::zero(mode_);
  return values_[offset(p)];
}

std::vector<LatticePoint> LatticeSignal::points() const {
  std::vector<LatticePoint> pts;
  pts.reserve(values_.size());
  if (dimension() == 1) {
    for (auto i = extent_.axis(0).lo; i <= extent_.axis(0).hi; ++i) pts.emplace_back(i);
  } else {
    for (auto i = extent_.axis(0).lo; i <= extent_.axis(0).hi; ++i)
      for (auto j = extent_.axis(1).lo; j <= extent_.axis(1).hi; ++j) pts.emplace_back(i, j);
  }
  return pts;
}

AtomicMeasure LatticeSignal::to_measure() const {
  std::vector<Atom> atoms;
  const auto pts = points();
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (!values_[k].is_zero()) atoms.emplace_back(pts[k], values_[k]);
  return AtomicMeasure(dimension(), mode_, atoms);
}

LatticeSignal LatticeSignal::resampled(const WindowSpec& window) const {
  require_dimension(dimension(), window.dimension());
  LatticeSignal out(window, mode_);
  const auto pts = out.points();
  for (std::size_t k = 0; k < pts.size(); ++k) out.values_[k] = at(pts[k]);
  return out;
}

std::optional<WindowSpec> LatticeSignal::support() const { return to_measure().bounding_box(); }

bool LatticeSignal::same_function(const LatticeSignal& other) const {
  require_dimension(dimension(), other.dimension());
  if (mode_ != other.mode_) throw ModeMismatch("comparing signals with different modes");
  return to_measure() == other.to_measure();
}

Scalar LatticeSignal::max_abs_difference(const LatticeSignal& other) const {
  require_dimension(dimension(), other.dimension());
  const AtomicMeasure diff = to_measure() - other.to_measure();
  return diff.max_abs_weight();
}

namespace {

LatticeSignal scatter(const LatticeSignal& f, const AtomicMeasure& m, const WindowSpec& window) {
  require_dimension(f.dimension(), m.dimension());
  if (f.mode() != m.mode()) throw ModeMismatch("signal and measure have different modes");
  AtomicMeasure::AtomMap acc;
  const auto pts = f.points();
  const auto& vals = f.values();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (vals[k].is_zero()) continue;
    for (const auto& [q, w] : m.atoms()) {
      const LatticePoint p = pts[k] + q;
      if (window.contains(p)) accumulate(acc, p, vals[k] * w);
    }
  }
  std::vector<Atom> atoms(acc.begin(), acc.end());
  return LatticeSignal::from_measure(AtomicMeasure(f.dimension(), f.mode(), atoms), window);
}

}  // namespace

LatticeSignal apply_to_signal(const LatticeSignal& f, const AtomicMeasure& m) {
  const auto box = m.bounding_box();
  if (!box) {
    require_dimension(f.dimension(), m.dimension());
    return LatticeSignal(f.extent(), f.mode());
  }
  return scatter(f, m, f.extent().sum(*box));
}

LatticeSignal apply_to_signal(const LatticeSignal& f, const AtomicMeasure& m,
                              const WindowSpec& window) {
  return scatter(f, m, window);
}

}  // namespace deconv
