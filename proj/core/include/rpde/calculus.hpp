#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rpde/coefficients.hpp"
#include "rpde/controlled_path.hpp"
#include "rpde/rough_path.hpp"
#include "rpde/spectral.hpp"

namespace rpde {

// Compensated Riemann sums for the rough convolution
//
//   int_s^t S(t - r) y_r dX_r = lim sum_{[u,v]} S(t-u) [y_u X_{u,v} + y'_u X2_{u,v}]
//
// evaluated on the grid refined dyadically `depth` times. Between grid points
// the rough path is linear with its bracket spread evenly in time, and the
// integrand follows the semigroup-transported controlled expansion
//
//   y_u  = S(u - t_j) (y_j + y'_j X_{t_j,u}),   y'_u = S(u - t_j) y'_j,
//
// which makes the sub-germs on one grid interval add up exactly (Chen), so
// every depth returns the same value up to rounding.

/// int_{t_s}^{t_t} S(t_t - r) y_r dX_r.
SpectralField rough_integral(const ControlledPath& p, const RoughPath& X, const SpaceScale& scale,
                             std::size_t s, std::size_t t, unsigned depth = 0);

/// int_0^{t_t} S(t_t - r) y_r dX_r.
inline SpectralField rough_convolution(const ControlledPath& p, const RoughPath& X,
                                       const SpaceScale& scale, std::size_t t, unsigned depth = 0) {
  return rough_integral(p, X, scale, 0, t, depth);
}

/// Increases the depth from 0 until two successive values differ by less than
/// rel_tol (relative to max(1, |value|_{gamma - 2 alpha})); throws
/// NonCauchyError naming [0, t_t] when max_depth is reached first.
SpectralField rough_convolution_converged(const ControlledPath& p, const RoughPath& X,
                                          const SpaceScale& scale, std::size_t t,
                                          unsigned max_depth = 12, double rel_tol = 1e-9,
                                          unsigned* depth_used = nullptr);

/// Contribution of grid interval j to the convolution at t_{j+1}:
/// sum over the refined pieces of S(t_{j+1} - u)[y_u X_{u,v} + y'_u X2_{u,v}]
/// given the integrand (y_j, y'_j) at t_j.
SpectralField rough_step_increment(const SpectralField& y_j, const SpectralField& yp_j,
                                   const RoughPath& X, std::size_t j, const SpaceScale& scale,
                                   unsigned depth);

/// Convolution at every grid point through z_{j+1} = S(h_j) z_j + increment_j.
std::vector<SpectralField> rough_convolution_path(const ControlledPath& p, const RoughPath& X,
                                                  const SpaceScale& scale, unsigned depth = 0);

/// int_0^{t_t} S(t_t - s) F(y_s) ds with left-point values of F(y) and the
/// semigroup integrated exactly per mode on each interval.
SpectralField drift_convolution(const std::vector<SpectralField>& y, const TimeGrid& grid,
                                const Coefficients& coeffs, const SpaceScale& scale,
                                std::size_t t);

/// drift_convolution with F(y_i) already evaluated.
SpectralField drift_convolution_from_values(const std::vector<SpectralField>& f_values,
                                            const TimeGrid& grid, const SpaceScale& scale,
                                            std::size_t t);

/// Same quadrature at every grid point (recursive form).
std::vector<SpectralField> drift_convolution_path(const std::vector<SpectralField>& y,
                                                  const TimeGrid& grid, const Coefficients& coeffs,
                                                  const SpaceScale& scale);

/// (G(y), DG(y) G(y)) at regularity gamma - sigma.
ControlledPath compose_G(const ControlledPath& p, const Coefficients& coeffs);

/// Sewing defect |int_s^t S(t-r) y dX - S(t-s) y_s X_{s,t} - S(t-s) y'_s X2_{s,t}|
/// measured in B_{gamma - 2 alpha + beta}.
double sewing_local_error(const ControlledPath& p, const RoughPath& X, const SpaceScale& scale,
                          std::size_t s, std::size_t t, double beta, unsigned depth = 0);

struct SewingWindowRow {
  std::size_t window_steps = 0;
  double window_length = 0.0;
  double mean_error = 0.0;
  std::size_t samples = 0;
};

struct SewingProbe {
  double beta = 0.0;
  double floor = 0.0;  ///< 3 alpha - beta - 0.1
  double fitted_rate = 0.0;
  std::vector<SewingWindowRow> rows;
  bool passed() const { return fitted_rate >= floor; }
};

/// Mean sewing defect over all disjoint windows of 2, 4, ... up to
/// `max_window_steps` grid steps, and the least-squares exponent of
/// error against window length.
SewingProbe sewing_error_probe(const ControlledPath& p, const RoughPath& X, const SpaceScale& scale,
                               double beta, unsigned depth, std::size_t max_window_steps);

/// Probe over a suite of paths on equal step counts: the per-size mean errors
/// are averaged across the suite before the slope is fitted.
SewingProbe sewing_error_probe_suite(std::span<const ControlledPath> paths,
                                     std::span<const RoughPath> rough_paths,
                                     const SpaceScale& scale, double beta, unsigned depth,
                                     std::size_t max_window_steps);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct BoundPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

/// lhs: norm of compose_G(p) at gamma - sigma; rhs: 1 + norm of p.
BoundPair composition_bound_check(const ControlledPath& p, const Coefficients& coeffs,
                                  const RoughPath& X);

/// lhs: norm at gamma + sigma of (int S y dX, y);
/// rhs: |y_0|_gamma + |y'_0|_{gamma - alpha} + T^{alpha - sigma} * norm of p.
BoundPair rough_integral_bound_check(const ControlledPath& p, const RoughPath& X,
                                     const SpaceScale& scale, double sigma, unsigned depth = 0);

/// lhs: norm of (int S F(y) ds, 0); rhs: (1 + ||y||_{inf,gamma}) T^{1 - delta}.
BoundPair drift_bound_check(const ControlledPath& p, const RoughPath& X, const Coefficients& coeffs,
                            const SpaceScale& scale);

/// lhs: norm of (S(.) y0, 0); rhs: |y0|_gamma.
BoundPair initial_bound_check(const SpectralField& y0, const RoughPath& X, const SpaceScale& scale,
                              double gamma);

/// Controlled path (S(t) y0, 0) on the grid of X.
ControlledPath semigroup_orbit(const SpectralField& y0, const RoughPath& X, const SpaceScale& scale,
                               double gamma);

}  // namespace rpde
