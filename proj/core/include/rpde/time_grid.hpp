#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rpde {

/// Strictly increasing times 0 = t_0 < ... < t_n.
///
/// Step sizes are stored next to the points and carried over verbatim by
/// `shifted` and `slice`, so semigroup factors built from them are bitwise
/// identical on a sub-grid and on the grid it came from.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> points);

  static TimeGrid uniform(double horizon, std::size_t steps);

  std::size_t steps() const { return steps_.size(); }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double step(std::size_t i) const { return steps_[i]; }
  double horizon() const { return points_.back(); }
  std::span<const double> points() const { return points_; }
  std::span<const double> step_sizes() const { return steps_; }

  /// Grid of [t_first, t_last] re-based to start at zero.
  TimeGrid slice(std::size_t first, std::size_t last) const;
  /// Grid of [t_s, T] re-based to start at zero.
  TimeGrid shifted(std::size_t s) const { return slice(s, steps()); }

  /// Every `factor`-th point; the number of steps must be divisible by `factor`.
  TimeGrid coarsened(std::size_t factor) const;

  /// Index of the largest grid point <= t (with a relative snapping slack).
  std::size_t index_at_or_before(double t) const;
  /// Index i with t_i == t up to `rel_tol`; throws InvalidArgument otherwise.
  std::size_t index_of(double t, double rel_tol = 1e-9) const;

  bool same_as(const TimeGrid& other, double rel_tol = 1e-12) const;

 private:
  TimeGrid(std::vector<double> points, std::vector<double> steps);

  std::vector<double> points_{0.0};
  std::vector<double> steps_;
};

}  // namespace rpde
