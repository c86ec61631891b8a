#include "deconv/grid.hpp"

#include <cmath>
#include <sstream>

#include "deconv/errors.hpp"

namespace deconv {

GridShape::GridShape(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2) throw InvalidArgument("grid must have 1 or 2 axes");
  for (const auto& ax : axes_) {
    if (ax.count < 2) throw InvalidArgument("grid axis needs at least 2 samples");
    if (!(ax.spacing > 0.0) || !std::isfinite(ax.spacing))
      throw InvalidArgument("grid spacing must be positive and finite");
    if (!std::isfinite(ax.origin)) throw InvalidArgument("grid origin must be finite");
  }
}

GridShape GridShape::line(std::size_t count, double spacing, double origin) {
  return GridShape({GridAxis{count, spacing, origin}});
}

GridShape GridShape::centered(int dim, double spacing, double half_range) {
  const auto half = static_cast<std::size_t>(std::ceil(half_range / spacing - 1e-9));
  const GridAxis ax{2 * half + 1, spacing, -static_cast<double>(half) * spacing};
  if (dim == 1) return GridShape({ax});
  if (dim == 2) return GridShape({ax, ax});
  throw InvalidArgument("grid dimension must be 1 or 2");
}

std::size_t GridShape::size() const {
  std::size_t n = 1;
  for (const auto& ax : axes_) n *= ax.count;
  return n;
}

double GridShape::cell_volume() const {
  double v = 1.0;
  for (const auto& ax : axes_) v *= ax.spacing;
  return v;
}

GridShape GridShape::padded(const std::vector<std::size_t>& pad) const {
  if (pad.size() != axes_.size()) throw DimensionMismatch("padding rank differs from grid rank");
  std::vector<GridAxis> axes = axes_;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    axes[a].count += 2 * pad[a];
    axes[a].origin -= static_cast<double>(pad[a]) * axes[a].spacing;
  }
  return GridShape(std::move(axes));
}

std::vector<double> GridShape::position(std::size_t k) const {
  std::vector<double> x(axes_.size());
  for (std::size_t a = axes_.size(); a-- > 0;) {
    x[a] = axes_[a].coordinate(k % axes_[a].count);
    k /= axes_[a].count;
  }
  return x;
}

bool operator==(const GridShape& a, const GridShape& b) {
  if (a.axes_.size() != b.axes_.size()) return false;
  for (std::size_t i = 0; i < a.axes_.size(); ++i) {
    const auto& x = a.axes_[i];
    const auto& y = b.axes_[i];
    if (x.count != y.count || x.spacing != y.spacing || x.origin != y.origin) return false;
  }
  return true;
}

std::string GridShape::str() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    if (a) os << " x ";
    os << axes_[a].count << "@" << axes_[a].spacing << "+" << axes_[a].origin;
  }
  return os.str();
}

GridSignal::GridSignal(GridShape shape, std::vector<double> samples)
    : shape_(std::move(shape)), samples_(std::move(samples)) {
  if (samples_.size() != shape_.size())
    throw InvalidArgument("grid signal has " + std::to_string(samples_.size()) +
                          " samples for shape " + shape_.str());
  for (double v : samples_)
    if (!std::isfinite(v)) throw InvalidArgument("grid signal sample is not finite");
}

GridSignal::GridSignal(GridShape shape) : shape_(std::move(shape)), samples_(shape_.size(), 0.0) {}

double GridSignal::integral() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s * shape_.cell_volume();
}

GridSignal GridSignal::zero_padded(const std::vector<std::size_t>& pad) const {
  return on_grid(shape_.padded(pad));
}

GridSignal GridSignal::on_grid(const GridShape& target) const {
  if (target.dimension() != dimension()) throw DimensionMismatch("grid rank mismatch");
  std::vector<long> shift(static_cast<std::size_t>(dimension()));
  for (int a = 0; a < dimension(); ++a) {
    const auto& src = shape_.axis(a);
    const auto& dst = target.axis(a);
    if (std::abs(src.spacing - dst.spacing) > 1e-12 * src.spacing)
      throw InvalidArgument("grids have different spacing");
    const double offset = (dst.origin - src.origin) / src.spacing;
    const double rounded = std::round(offset);
    if (std::abs(offset - rounded) > 1e-6) throw InvalidArgument("grids are not sample-aligned");
    shift[static_cast<std::size_t>(a)] = static_cast<long>(rounded);
  }
  std::vector<double> out(target.size(), 0.0);
  const auto& t0 = target.axis(0);
  const auto& s0 = shape_.axis(0);
  const std::size_t t1 = dimension() == 2 ? target.axis(1).count : 1;
  const std::size_t s1 = dimension() == 2 ? shape_.axis(1).count : 1;
  const long sh1 = dimension() == 2 ? shift[1] : 0;
  for (std::size_t i = 0; i < t0.count; ++i) {
    const long si = static_cast<long>(i) + shift[0];
    if (si < 0 || si >= static_cast<long>(s0.count)) continue;
    for (std::size_t j = 0; j < t1; ++j) {
      const long sj = static_cast<long>(j) + sh1;
      if (sj < 0 || sj >= static_cast<long>(s1)) continue;
      out[i * t1 + j] = samples_[static_cast<std::size_t>(si) * s1 + static_cast<std::size_t>(sj)];
    }
  }
  return GridSignal(target, std::move(out));
}

namespace {

void require_same_shape(const GridSignal& a, const GridSignal& b) {
  if (!(a.shape() == b.shape()))
    throw DimensionMismatch("grid shapes differ: " + a.shape().str() + " vs " + b.shape().str());
}

}  // namespace

double rms_difference(const GridSignal& a, const GridSignal& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.samples().size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.samples().size()));
}

double relative_l2_error(const GridSignal& a, const GridSignal& b) {
  require_same_shape(a, b);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < a.samples().size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

double max_abs_difference(const GridSignal& a, const GridSignal& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.samples().size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace deconv
