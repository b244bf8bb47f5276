#include "rpde/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rpde/error.hpp"

namespace rpde {
namespace {

void require_aligned(const ControlledPath& p, const RoughPath& X) {
  if (!p.grid.same_as(X.grid()))
    throw GridMismatch("controlled path and rough path are on different grids");
  p.validate();
}

// Sum over the 2^depth pieces [u, v] of grid interval j of
//   exp(-lam (lead + h - r)) exp(-lam r) [y X_{u,v} + y' (X_{t_j,u} X_{u,v} + X2_{u,v})]
// with r = u - t_j. `lead` is the distance from t_{j+1} to the evaluation time.
void accumulate_interval(SpectralField& out, const SpectralField& y, const SpectralField& yp,
                         const RoughPath& X, std::size_t j, std::span<const double> lam,
                         double lead, unsigned depth) {
  const std::size_t pieces = std::size_t{1} << depth;
  const double frac = 1.0 / static_cast<double>(pieces);
  const double h = X.grid().step(j);
  const double dx = X.increment(j, j + 1);
  const double piece_dx = dx * frac;
  const double piece_x2 = 0.5 * piece_dx * piece_dx + X.bracket(j) * frac;
  const auto yc = y.coeffs();
  const auto ypc = yp.coeffs();
  auto oc = out.coeffs();
  for (std::size_t m = 0; m < pieces; ++m) {
    const double r = h * static_cast<double>(m) * frac;
    const double x_from_left = dx * static_cast<double>(m) * frac;
    const double second = x_from_left * piece_dx + piece_x2;
    for (std::size_t k = 0; k < oc.size(); ++k) {
      const double weight = std::exp(-lam[k] * (lead + h - r)) * std::exp(-lam[k] * r);
      oc[k] += weight * (piece_dx * yc[k] + second * ypc[k]);
    }
  }
}

}  // namespace

SpectralField rough_step_increment(const SpectralField& y_j, const SpectralField& yp_j,
                                   const RoughPath& X, std::size_t j, const SpaceScale& scale,
                                   unsigned depth) {
  if (!scale.matches(y_j)) throw GridMismatch("field shape does not match the space scale");
  const auto lam = scale.decay_rates();
  SpectralField out = SpectralField::zeros_like(y_j);
  accumulate_interval(out, y_j, yp_j, X, j, lam, 0.0, depth);
  return out;
}

SpectralField rough_integral(const ControlledPath& p, const RoughPath& X, const SpaceScale& scale,
                             std::size_t s, std::size_t t, unsigned depth) {
  require_aligned(p, X);
  if (s > t || t > X.steps()) throw InvalidArgument("rough_integral needs s <= t <= n");
  if (!scale.matches(p.y.front())) throw GridMismatch("field shape does not match the space scale");
  const auto lam = scale.decay_rates();
  const auto& g = X.grid();
  SpectralField out = SpectralField::zeros_like(p.y.front());
  for (std::size_t j = s; j < t; ++j)
    accumulate_interval(out, p.y[j], p.y_prime[j], X, j, lam, g[t] - g[j + 1], depth);
  return out;
}

SpectralField rough_convolution_converged(const ControlledPath& p, const RoughPath& X,
                                          const SpaceScale& scale, std::size_t t,
                                          unsigned max_depth, double rel_tol,
                                          unsigned* depth_used) {
  const double level = p.gamma - 2.0 * X.alpha();
  SpectralField prev = rough_convolution(p, X, scale, t, 0);
  double diff = 0.0;
  for (unsigned d = 1; d <= max_depth; ++d) {
    SpectralField next = rough_convolution(p, X, scale, t, d);
    diff = norm_gamma(next - prev, level);
    if (diff <= rel_tol * std::max(1.0, norm_gamma(next, level))) {
      if (depth_used) *depth_used = d;
      return next;
    }
    prev = std::move(next);
  }
  throw NonCauchyError(0.0, X.grid()[t], diff);
}

std::vector<SpectralField> rough_convolution_path(const ControlledPath& p, const RoughPath& X,
                                                  const SpaceScale& scale, unsigned depth) {
  require_aligned(p, X);
  std::vector<SpectralField> z;
  z.reserve(p.y.size());
  z.push_back(SpectralField::zeros_like(p.y.front()));
  for (std::size_t j = 0; j < X.steps(); ++j) {
    SpectralField next = semigroup_apply(z.back(), X.grid().step(j), scale);
    next += rough_step_increment(p.y[j], p.y_prime[j], X, j, scale, depth);
    z.push_back(std::move(next));
  }
  return z;
}

SpectralField drift_convolution(const std::vector<SpectralField>& y, const TimeGrid& grid,
                                const Coefficients& coeffs, const SpaceScale& scale,
                                std::size_t t) {
  if (y.size() != grid.size()) throw InvalidArgument("drift_convolution needs y on every grid point");
  if (t > grid.steps()) throw InvalidArgument("drift_convolution: index beyond grid");
  if (!coeffs.has_drift()) return SpectralField::zeros_like(y.front());
  std::vector<SpectralField> f(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(t));
  for (auto& v : f) v = coeffs.F(v);
  f.push_back(SpectralField::zeros_like(y.front()));
  return drift_convolution_from_values(f, grid, scale, t);
}

SpectralField drift_convolution_from_values(const std::vector<SpectralField>& f_values,
                                            const TimeGrid& grid, const SpaceScale& scale,
                                            std::size_t t) {
  if (f_values.size() < t || t > grid.steps())
    throw InvalidArgument("drift_convolution: index beyond grid");
  const auto lam = scale.decay_rates();
  SpectralField out = SpectralField::zeros_like(f_values.front());
  for (std::size_t i = 0; i < t; ++i) {
    const auto& f = f_values[i];
    const auto w = semigroup_integral_factors(scale, grid.step(i));
    const double lead = grid[t] - grid[i + 1];
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] += std::exp(-lam[k] * lead) * w[k] * f[k];
  }
  return out;
}

std::vector<SpectralField> drift_convolution_path(const std::vector<SpectralField>& y,
                                                  const TimeGrid& grid, const Coefficients& coeffs,
                                                  const SpaceScale& scale) {
  if (y.size() != grid.size()) throw InvalidArgument("drift_convolution needs y on every grid point");
  std::vector<SpectralField> out;
  out.reserve(y.size());
  out.push_back(SpectralField::zeros_like(y.front()));
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    SpectralField next = semigroup_apply(out.back(), grid.step(i), scale);
    if (coeffs.has_drift()) {
      const SpectralField f = coeffs.F(y[i]);
      const auto w = semigroup_integral_factors(scale, grid.step(i));
      for (std::size_t k = 0; k < next.size(); ++k) next[k] += w[k] * f[k];
    }
    out.push_back(std::move(next));
  }
  return out;
}

ControlledPath compose_G(const ControlledPath& p, const Coefficients& coeffs) {
  p.validate();
  ControlledPath out;
  out.grid = p.grid;
  out.gamma = p.gamma - coeffs.diffusion_loss;
  out.alpha = p.alpha;
  out.y.reserve(p.y.size());
  out.y_prime.reserve(p.y.size());
  for (const auto& y : p.y) {
    out.y.push_back(coeffs.G(y));
    out.y_prime.push_back(coeffs.DGG(y));
  }
  return out;
}

double sewing_local_error(const ControlledPath& p, const RoughPath& X, const SpaceScale& scale,
                          std::size_t s, std::size_t t, double beta, unsigned depth) {
  if (s >= t) throw InvalidArgument("sewing_local_error needs s < t");
  const double a = X.alpha();
  if (!(beta >= 0.0 && beta < 3.0 * a)) throw InvalidArgument("beta must lie in [0, 3 alpha)");
  SpectralField err = rough_integral(p, X, scale, s, t, depth);
  SpectralField germ = p.y[s] * X.increment(s, t);
  germ.axpy(chen_reconstruct(X, s, t), p.y_prime[s]);
  err -= semigroup_apply(germ, X.grid()[t] - X.grid()[s], scale);
  return norm_gamma(err, p.gamma - 2.0 * a + beta);
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

SewingProbe sewing_error_probe(const ControlledPath& p, const RoughPath& X, const SpaceScale& scale,
                               double beta, unsigned depth, std::size_t max_window_steps) {
  require_aligned(p, X);
  SewingProbe probe;
  probe.beta = beta;
  probe.floor = 3.0 * X.alpha() - beta - 0.1;
  const auto& g = X.grid();
  std::vector<double> lengths, errors;
  for (std::size_t m = 2; m <= std::min(max_window_steps, X.steps()); m *= 2) {
    SewingWindowRow row;
    row.window_steps = m;
    double err_sum = 0.0, len_sum = 0.0;
    for (std::size_t s = 0; s + m <= X.steps(); s += m) {
      err_sum += sewing_local_error(p, X, scale, s, s + m, beta, depth);
      len_sum += g[s + m] - g[s];
      ++row.samples;
    }
    row.mean_error = err_sum / static_cast<double>(row.samples);
    row.window_length = len_sum / static_cast<double>(row.samples);
    probe.rows.push_back(row);
    if (row.mean_error > 0.0) {
      lengths.push_back(row.window_length);
      errors.push_back(row.mean_error);
    }
  }
  // Identically zero defects (exact germs) count as an arbitrarily fast rate.
  probe.fitted_rate = lengths.size() >= 2 ? fit_loglog_slope(lengths, errors)
                                          : std::numeric_limits<double>::infinity();
  return probe;
}

SewingProbe sewing_error_probe_suite(std::span<const ControlledPath> paths,
                                     std::span<const RoughPath> rough_paths,
                                     const SpaceScale& scale, double beta, unsigned depth,
                                     std::size_t max_window_steps) {
  if (paths.empty() || paths.size() != rough_paths.size())
    throw InvalidArgument("sewing_error_probe_suite: need one rough path per controlled path");
  SewingProbe pooled;
  pooled.beta = beta;
  pooled.floor = 3.0 * rough_paths.front().alpha() - beta - 0.1;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto one = sewing_error_probe(paths[i], rough_paths[i], scale, beta, depth,
                                        max_window_steps);
    if (i == 0) {
      pooled.rows = one.rows;
      for (auto& r : pooled.rows) r.mean_error = 0.0, r.window_length = 0.0, r.samples = 0;
    } else if (one.rows.size() != pooled.rows.size()) {
      throw GridMismatch("sewing_error_probe_suite: paths differ in step count");
    }
    for (std::size_t k = 0; k < one.rows.size(); ++k) {
      pooled.rows[k].mean_error += one.rows[k].mean_error / static_cast<double>(paths.size());
      pooled.rows[k].window_length += one.rows[k].window_length / static_cast<double>(paths.size());
      pooled.rows[k].samples += one.rows[k].samples;
    }
  }
  std::vector<double> lengths, errors;
  for (const auto& r : pooled.rows)
    if (r.mean_error > 0.0) lengths.push_back(r.window_length), errors.push_back(r.mean_error);
  pooled.fitted_rate = lengths.size() >= 2 ? fit_loglog_slope(lengths, errors)
                                           : std::numeric_limits<double>::infinity();
  return pooled;
}

BoundPair composition_bound_check(const ControlledPath& p, const Coefficients& coeffs,
                                  const RoughPath& X) {
  return {gubinelli_norm(compose_G(p, coeffs), X).total, 1.0 + gubinelli_norm(p, X).total};
}

BoundPair rough_integral_bound_check(const ControlledPath& p, const RoughPath& X,
                                     const SpaceScale& scale, double sigma, unsigned depth) {
  ControlledPath z;
  z.grid = p.grid;
  z.y = rough_convolution_path(p, X, scale, depth);
  z.y_prime = p.y;
  z.gamma = p.gamma + sigma;
  z.alpha = p.alpha;
  const double a = X.alpha();
  const double rhs = norm_gamma(p.y.front(), p.gamma) + norm_gamma(p.y_prime.front(), p.gamma - a) +
                     std::pow(X.grid().horizon(), a - sigma) * gubinelli_norm(p, X).total;
  return {gubinelli_norm(z, X).total, rhs};
}

BoundPair drift_bound_check(const ControlledPath& p, const RoughPath& X, const Coefficients& coeffs,
                            const SpaceScale& scale) {
  ControlledPath d;
  d.grid = p.grid;
  d.y = drift_convolution_path(p.y, p.grid, coeffs, scale);
  d.y_prime.assign(p.y.size(), SpectralField::zeros_like(p.y.front()));
  d.gamma = p.gamma;
  d.alpha = p.alpha;
  const double rhs =
      (1.0 + sup_norm(p.y, p.gamma)) * std::pow(X.grid().horizon(), 1.0 - coeffs.drift_loss);
  return {gubinelli_norm(d, X).total, rhs};
}

ControlledPath semigroup_orbit(const SpectralField& y0, const RoughPath& X, const SpaceScale& scale,
                               double gamma) {
  ControlledPath p;
  p.grid = X.grid();
  p.gamma = gamma;
  p.alpha = X.alpha();
  p.y.reserve(X.grid().size());
  p.y.push_back(y0);
  for (std::size_t j = 0; j < X.steps(); ++j)
    p.y.push_back(semigroup_apply(p.y.back(), X.grid().step(j), scale));
  p.y_prime.assign(p.y.size(), SpectralField::zeros_like(y0));
  return p;
}

BoundPair initial_bound_check(const SpectralField& y0, const RoughPath& X, const SpaceScale& scale,
                              double gamma) {
  return {gubinelli_norm(semigroup_orbit(y0, X, scale, gamma), X).total, norm_gamma(y0, gamma)};
}

}  // namespace rpde
