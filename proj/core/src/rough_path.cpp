#include "rpde/rough_path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rpde/error.hpp"

namespace rpde {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 / 3.0 && alpha < 0.5))
    throw InvalidArgument("Hölder exponent alpha must lie in (1/3, 1/2), got " +
                          std::to_string(alpha));
}

std::string describe_grid(const TimeGrid& g) {
  std::ostringstream os;
  os << "{n=" << g.steps() << ", T=" << g.horizon() << "}";
  return os.str();
}

void require_common_grid(const RoughPath& X, const RoughPath& Y) {
  if (!X.grid().same_as(Y.grid()))
    throw GridMismatch("rough paths live on different grids: " + describe_grid(X.grid()) + " vs " +
                       describe_grid(Y.grid()));
  if (X.alpha() != Y.alpha()) throw GridMismatch("rough paths carry different alpha");
}

}  // namespace

RoughPath::RoughPath(TimeGrid grid, std::vector<double> x, std::vector<double> x2_step,
                     double alpha)
    : grid_(std::move(grid)), x_(std::move(x)), x2_step_(std::move(x2_step)), alpha_(alpha) {
  check_alpha(alpha_);
  if (x_.size() != grid_.size()) throw InvalidArgument("rough path needs one value per grid point");
  if (x2_step_.size() != grid_.steps())
    throw InvalidArgument("rough path needs one second-order value per grid interval");
  if (x_.front() != 0.0) throw InvalidArgument("rough path must start at X_0 = 0");
  for (double v : x_)
    if (!std::isfinite(v)) throw InvalidArgument("rough path values must be finite");
  for (double v : x2_step_)
    if (!std::isfinite(v)) throw InvalidArgument("second-order values must be finite");
}

double RoughPath::bracket(std::size_t i) const {
  const double dx = x_[i + 1] - x_[i];
  return x2_step_[i] - 0.5 * dx * dx;
}

RoughPath RoughPath::slice(std::size_t first, std::size_t last) const {
  TimeGrid g = grid_.slice(first, last);
  std::vector<double> x(last - first + 1);
  for (std::size_t i = first; i <= last; ++i) x[i - first] = x_[i] - x_[first];
  std::vector<double> x2(x2_step_.begin() + static_cast<std::ptrdiff_t>(first),
                         x2_step_.begin() + static_cast<std::ptrdiff_t>(last));
  return RoughPath(std::move(g), std::move(x), std::move(x2), alpha_);
}

RoughPath zero_rough_path(const TimeGrid& grid, double alpha) {
  return RoughPath(grid, std::vector<double>(grid.size(), 0.0),
                   std::vector<double>(grid.steps(), 0.0), alpha);
}

RoughPath canonical_lift_smooth(std::span<const double> samples, const TimeGrid& grid,
                                double alpha) {
  if (samples.size() != grid.size())
    throw InvalidArgument("canonical lift needs one sample per grid point");
  for (double v : samples)
    if (!std::isfinite(v)) throw InvalidArgument("canonical lift: non-finite sample");
  std::vector<double> x(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) x[i] = samples[i] - samples[0];
  std::vector<double> x2(grid.steps());
  for (std::size_t i = 0; i < x2.size(); ++i) {
    const double dx = x[i + 1] - x[i];
    x2[i] = 0.5 * dx * dx;
  }
  return RoughPath(grid, std::move(x), std::move(x2), alpha);
}

RoughPath canonical_lift_smooth(const std::function<double(double)>& f, const TimeGrid& grid,
                                double alpha) {
  std::vector<double> samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = f(grid[i]);
  return canonical_lift_smooth(samples, grid, alpha);
}

double chen_reconstruct(const RoughPath& X, std::size_t s, std::size_t t) {
  if (s > t) throw InvalidArgument("chen_reconstruct needs s <= t");
  if (t > X.steps()) throw InvalidArgument("chen_reconstruct: index beyond grid");
  const auto x = X.x();
  const auto x2 = X.x2_step();
  double acc = 0.0;
  for (std::size_t i = s; i < t; ++i) acc += x2[i] + (x[i] - x[s]) * (x[i + 1] - x[i]);
  return acc;
}

std::vector<double> chen_row(const RoughPath& X, std::size_t s) {
  const auto x = X.x();
  const auto x2 = X.x2_step();
  const std::size_t n = X.steps();
  std::vector<double> row(n + 1 - s, 0.0);
  double acc = 0.0;
  for (std::size_t i = s; i < n; ++i) {
    acc += x2[i] + (x[i] - x[s]) * (x[i + 1] - x[i]);
    row[i + 1 - s] = acc;
  }
  return row;
}

std::vector<double> materialize_x2_table(const RoughPath& X) {
  const std::size_t m = X.steps() + 1;
  std::vector<double> table(m * m, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    const auto row = chen_row(X, s);
    std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(s * m + s));
  }
  return table;
}

double chen_defect(std::span<const double> table, std::span<const double> x) {
  const std::size_t m = x.size();
  if (table.size() != m * m) throw InvalidArgument("chen_defect: table must be (n+1)x(n+1)");
  double worst = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    const double* row_s = table.data() + s * m;
    for (std::size_t u = s; u < m; ++u) {
      const double* row_u = table.data() + u * m;
      const double xsu = x[u] - x[s];
      const double x2su = row_s[u];
      for (std::size_t t = u; t < m; ++t) {
        const double d = row_s[t] - x2su - row_u[t] - xsu * (x[t] - x[u]);
        worst = std::max(worst, std::abs(d));
      }
    }
  }
  return worst;
}

double holder_norm(std::span<const double> values, const TimeGrid& grid, double theta,
                   std::size_t stride) {
  if (!(theta > 0.0)) throw InvalidArgument("holder_norm needs theta > 0");
  if (values.empty() || values.size() != grid.size())
    throw InvalidArgument("holder_norm needs one value per grid point");
  stride = std::max<std::size_t>(stride, 1);
  double worst = 0.0;
  for (std::size_t s = 0; s < values.size(); s += stride)
    for (std::size_t t = s + stride; t < values.size(); t += stride)
      worst = std::max(worst, std::abs(values[t] - values[s]) / std::pow(grid[t] - grid[s], theta));
  return worst;
}

namespace {

struct LevelSups {
  double first = 0.0;
  double second = 0.0;
};

LevelSups level_sups(const RoughPath& X, const RoughPath* Y) {
  const auto& g = X.grid();
  const double a = X.alpha();
  const auto x = X.x();
  LevelSups out;
  for (std::size_t s = 0; s < g.steps(); ++s) {
    const auto row_x = chen_row(X, s);
    std::vector<double> row_y;
    if (Y) row_y = chen_row(*Y, s);
    for (std::size_t t = s + 1; t < g.size(); ++t) {
      double d1 = x[t] - x[s];
      double d2 = row_x[t - s];
      if (Y) {
        d1 -= Y->x()[t] - Y->x()[s];
        d2 -= row_y[t - s];
      }
      const double lg = std::log(g[t] - g[s]);
      out.first = std::max(out.first, std::abs(d1) * std::exp(-a * lg));
      out.second = std::max(out.second, std::abs(d2) * std::exp(-2.0 * a * lg));
    }
  }
  return out;
}

}  // namespace

double rp_distance(const RoughPath& X, const RoughPath& Y) {
  require_common_grid(X, Y);
  const auto sups = level_sups(X, &Y);
  return sups.first + sups.second;
}

double rho_alpha(const RoughPath& X) {
  const auto sups = level_sups(X, nullptr);
  return sups.first + sups.second;
}

double first_level_holder(const RoughPath& X) { return level_sups(X, nullptr).first; }
double second_level_holder(const RoughPath& X) { return level_sups(X, nullptr).second; }

RoughPath shift(const RoughPath& X, std::size_t s) {
  if (s >= X.steps())
    throw InvalidArgument("shift index " + std::to_string(s) + " beyond grid with " +
                          std::to_string(X.steps()) + " steps");
  if (s == 0) return X;
  return X.slice(s, X.steps());
}

}  // namespace rpde
