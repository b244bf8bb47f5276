#include "rpde/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rpde/error.hpp"

namespace rpde {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidArgument("time grid needs at least one step");
  if (points_.front() != 0.0) throw InvalidArgument("time grid must start at t_0 = 0");
  steps_.resize(points_.size() - 1);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    if (!std::isfinite(points_[i + 1]) || !(points_[i + 1] > points_[i]))
      throw InvalidArgument("time grid must be strictly increasing (index " +
                            std::to_string(i + 1) + ")");
    steps_[i] = points_[i + 1] - points_[i];
  }
}

TimeGrid::TimeGrid(std::vector<double> points, std::vector<double> steps)
    : points_(std::move(points)), steps_(std::move(steps)) {}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("uniform grid needs n >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidArgument("uniform grid needs a positive finite horizon");
  std::vector<double> pts(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    pts[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
  pts.back() = horizon;
  return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::slice(std::size_t first, std::size_t last) const {
  if (first >= last || last > steps())
    throw InvalidArgument("grid slice [" + std::to_string(first) + ", " + std::to_string(last) +
                          "] outside grid with " + std::to_string(steps()) + " steps");
  std::vector<double> pts(last - first + 1);
  const double origin = points_[first];
  for (std::size_t i = first; i <= last; ++i) pts[i - first] = points_[i] - origin;
  std::vector<double> h(steps_.begin() + static_cast<std::ptrdiff_t>(first),
                        steps_.begin() + static_cast<std::ptrdiff_t>(last));
  return TimeGrid(std::move(pts), std::move(h));
}

TimeGrid TimeGrid::coarsened(std::size_t factor) const {
  if (factor == 0 || steps() % factor != 0)
    throw InvalidArgument("coarsening factor must divide the step count");
  std::vector<double> pts;
  std::vector<double> h;
  for (std::size_t i = 0; i <= steps(); i += factor) pts.push_back(points_[i]);
  for (std::size_t i = 0; i + factor <= steps(); i += factor) {
    double sum = 0.0;
    for (std::size_t j = i; j < i + factor; ++j) sum += steps_[j];
    h.push_back(sum);
  }
  return TimeGrid(std::move(pts), std::move(h));
}

std::size_t TimeGrid::index_at_or_before(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(horizon()));
  auto it = std::upper_bound(points_.begin(), points_.end(), t + slack);
  if (it == points_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(points_.begin(), it)) - 1;
}

std::size_t TimeGrid::index_of(double t, double rel_tol) const {
  const std::size_t i = index_at_or_before(t);
  const double tol = rel_tol * std::max(1.0, std::abs(horizon()));
  if (std::abs(points_[i] - t) <= tol) return i;
  if (i + 1 < points_.size() && std::abs(points_[i + 1] - t) <= tol) return i + 1;
  throw InvalidArgument("time " + std::to_string(t) + " is not a grid point");
}

bool TimeGrid::same_as(const TimeGrid& other, double rel_tol) const {
  if (size() != other.size()) return false;
  const double tol = rel_tol * std::max(1.0, std::abs(horizon()));
  for (std::size_t i = 0; i < size(); ++i)
    if (std::abs(points_[i] - other.points_[i]) > tol) return false;
  return true;
}

}  // namespace rpde
