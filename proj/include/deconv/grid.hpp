#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace deconv {

/// One axis of a uniform grid: sample i sits at origin + i * spacing.
struct GridAxis {
  std::size_t count = 0;
  double spacing = 1.0;
  double origin = 0.0;

  double coordinate(std::size_t i) const { return origin + static_cast<double>(i) * spacing; }
  double last() const { return coordinate(count - 1); }
};

/// Shape of a 1D or 2D uniform sampling grid.
class GridShape {
 public:
  explicit GridShape(std::vector<GridAxis> axes);

  static GridShape line(std::size_t count, double spacing, double origin);
  /// Symmetric grid covering [-half_range, half_range] at the given spacing.
  static GridShape centered(int dim, double spacing, double half_range);

  int dimension() const noexcept { return static_cast<int>(axes_.size()); }
  const GridAxis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  const std::vector<GridAxis>& axes() const noexcept { return axes_; }
  std::size_t size() const;
  /// Product of the spacings (the quadrature weight of one sample).
  double cell_volume() const;

  /// Grid extended by `pad[a]` extra samples on both sides of every axis.
  GridShape padded(const std::vector<std::size_t>& pad) const;

  /// Coordinates of the sample with flat (row-major) index k.
  std::vector<double> position(std::size_t k) const;

  friend bool operator==(const GridShape&, const GridShape&);

  std::string str() const;

 private:
  std::vector<GridAxis> axes_;
};

/// Uniformly sampled real function on a 1D/2D grid, row-major.
class GridSignal {
 public:
  GridSignal(GridShape shape, std::vector<double> samples);
  /// All-zero signal.
  explicit GridSignal(GridShape shape);

  const GridShape& shape() const noexcept { return shape_; }
  int dimension() const noexcept { return shape_.dimension(); }
  const std::vector<double>& samples() const noexcept { return samples_; }
  double operator[](std::size_t k) const { return samples_[k]; }

  /// Cell-volume weighted sum of the samples.
  double integral() const;

  /// Copy placed inside a larger grid with `pad[a]` zero samples per side.
  GridSignal zero_padded(const std::vector<std::size_t>& pad) const;
  /// Samples of `this` re-read on `target`, which must share spacing and be
  /// offset by a whole number of samples. Points off this grid read as 0.
  GridSignal on_grid(const GridShape& target) const;

 private:
  GridShape shape_;
  std::vector<double> samples_;
};

/// Root-mean-square of a - b over a shared grid.
double rms_difference(const GridSignal& a, const GridSignal& b);
/// ||a - b||_2 / ||b||_2 on a shared grid.
double relative_l2_error(const GridSignal& a, const GridSignal& b);
double max_abs_difference(const GridSignal& a, const GridSignal& b);

}  // namespace deconv
