#include "rpde/controlled_path.hpp"

#include <algorithm>
#include <cmath>

#include "rpde/error.hpp"

namespace rpde {
namespace {

void require_aligned(const ControlledPath& p, const RoughPath& X) {
  if (!p.grid.same_as(X.grid()))
    throw GridMismatch("controlled path and rough path are on different grids");
}

double inv_pow(double dt, double theta) { return std::exp(-theta * std::log(dt)); }

// |a - b - c * x|^2 weighted, for spans of equal length.
double remainder_sq(std::span<const Complex> yt, std::span<const Complex> ys,
                    std::span<const Complex> yps, double x, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t k = 0; k < yt.size(); ++k) acc += w[k] * std::norm(yt[k] - ys[k] - x * yps[k]);
  return acc;
}

}  // namespace

void ControlledPath::validate() const {
  if (y.size() != grid.size() || y_prime.size() != grid.size())
    throw InvalidArgument("controlled path needs (y, y') at every grid point");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!y[i].same_shape(y.front()) || !y_prime[i].same_shape(y.front()))
      throw GridMismatch("controlled path fields differ in (dim, cutoff)");
}

ControlledPath ControlledPath::slice(std::size_t first, std::size_t last) const {
  ControlledPath out;
  out.grid = grid.slice(first, last);
  out.y.assign(y.begin() + static_cast<std::ptrdiff_t>(first),
               y.begin() + static_cast<std::ptrdiff_t>(last + 1));
  out.y_prime.assign(y_prime.begin() + static_cast<std::ptrdiff_t>(first),
                     y_prime.begin() + static_cast<std::ptrdiff_t>(last + 1));
  out.gamma = gamma;
  out.alpha = alpha;
  return out;
}

SpectralField remainder(const ControlledPath& p, const RoughPath& X, std::size_t s, std::size_t t) {
  require_aligned(p, X);
  if (s > t) throw InvalidArgument("remainder needs s <= t");
  SpectralField r = p.y[t];
  r -= p.y[s];
  r.axpy(-X.increment(s, t), p.y_prime[s]);
  return r;
}

double sup_norm(const std::vector<SpectralField>& values, double gamma) {
  if (values.empty()) return 0.0;
  const auto w = norm_weights(values.front().dim(), values.front().cutoff(), gamma);
  double worst = 0.0;
  for (const auto& v : values) worst = std::max(worst, weighted_norm(v.coeffs(), w));
  return worst;
}

double holder_norm(const std::vector<SpectralField>& values, const TimeGrid& grid, double theta,
                   double gamma, std::size_t stride) {
  if (!(theta > 0.0)) throw InvalidArgument("holder_norm needs theta > 0");
  if (values.empty() || values.size() != grid.size())
    throw InvalidArgument("holder_norm needs one field per grid point");
  stride = std::max<std::size_t>(stride, 1);
  const auto w = norm_weights(values.front().dim(), values.front().cutoff(), gamma);
  double worst = 0.0;
  for (std::size_t s = 0; s < values.size(); s += stride) {
    const auto vs = values[s].coeffs();
    for (std::size_t t = s + stride; t < values.size(); t += stride) {
      const auto vt = values[t].coeffs();
      double acc = 0.0;
      for (std::size_t k = 0; k < vs.size(); ++k) acc += w[k] * std::norm(vt[k] - vs[k]);
      worst = std::max(worst, std::sqrt(acc) * inv_pow(grid[t] - grid[s], theta));
    }
  }
  return worst;
}

GubNormBreakdown gubinelli_norm(const ControlledPath& p, const RoughPath& X, std::size_t stride) {
  require_aligned(p, X);
  p.validate();
  const double a = X.alpha();
  const auto& f = p.y.front();
  const auto w_a = norm_weights(f.dim(), f.cutoff(), p.gamma - a);
  const auto w_2a = norm_weights(f.dim(), f.cutoff(), p.gamma - 2.0 * a);

  GubNormBreakdown b;
  b.sup_y = sup_norm(p.y, p.gamma);
  b.sup_yp = sup_norm(p.y_prime, p.gamma - a);
  b.hol_yp = holder_norm(p.y_prime, p.grid, a, p.gamma - 2.0 * a, stride);

  stride = std::max<std::size_t>(stride, 1);
  const auto x = X.x();
  for (std::size_t s = 0; s < p.y.size(); s += stride) {
    const auto ys = p.y[s].coeffs();
    const auto yps = p.y_prime[s].coeffs();
    for (std::size_t t = s + stride; t < p.y.size(); t += stride) {
      const auto yt = p.y[t].coeffs();
      const double xst = x[t] - x[s];
      double acc_a = 0.0;
      double acc_2a = 0.0;
      for (std::size_t k = 0; k < ys.size(); ++k) {
        const double r2 = std::norm(yt[k] - ys[k] - xst * yps[k]);
        acc_a += w_a[k] * r2;
        acc_2a += w_2a[k] * r2;
      }
      const double lg = std::log(p.grid[t] - p.grid[s]);
      b.hol_R = std::max(b.hol_R, std::sqrt(acc_a) * std::exp(-a * lg));
      b.hol2_R = std::max(b.hol2_R, std::sqrt(acc_2a) * std::exp(-2.0 * a * lg));
    }
  }
  b.total = b.sup_y + b.sup_yp + b.hol_yp + b.hol_R + b.hol2_R;
  return b;
}

double gubinelli_distance(const ControlledPath& a, const ControlledPath& b, const RoughPath& X) {
  if (a.y.size() != b.y.size()) throw GridMismatch("controlled paths differ in length");
  ControlledPath d = a;
  for (std::size_t i = 0; i < d.y.size(); ++i) {
    d.y[i] -= b.y[i];
    d.y_prime[i] -= b.y_prime[i];
  }
  return gubinelli_norm(d, X).total;
}

std::vector<HolderBoundPair> holder_bound_check(const ControlledPath& p, const RoughPath& X) {
  require_aligned(p, X);
  p.validate();
  const double a = X.alpha();
  const double x_holder = first_level_holder(X);
  const auto& f = p.y.front();
  std::vector<HolderBoundPair> out;
  for (double theta : {a, 2.0 * a}) {
    const auto w = norm_weights(f.dim(), f.cutoff(), p.gamma - theta);
    double r_holder = 0.0;
    for (std::size_t s = 0; s < p.y.size(); ++s)
      for (std::size_t t = s + 1; t < p.y.size(); ++t) {
        const double r = std::sqrt(remainder_sq(p.y[t].coeffs(), p.y[s].coeffs(),
                                                p.y_prime[s].coeffs(), X.increment(s, t), w));
        r_holder = std::max(r_holder, r * inv_pow(p.grid[t] - p.grid[s], a));
      }
    HolderBoundPair pair;
    pair.theta = theta;
    pair.lhs = holder_norm(p.y, p.grid, a, p.gamma - theta);
    pair.rhs = sup_norm(p.y_prime, p.gamma - theta) * x_holder + r_holder;
    out.push_back(pair);
  }
  return out;
}

}  // namespace rpde
