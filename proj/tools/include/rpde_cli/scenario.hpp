#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rpde/calculus.hpp"
#include "rpde/coefficients.hpp"
#include "rpde/rough_path.hpp"
#include "rpde/solver.hpp"
#include "rpde/spectral.hpp"

namespace rpde::cli {

struct ExperimentConfig;

SpaceScale space_scale(const ExperimentConfig& c);
SolverConfig solver_config(const ExperimentConfig& c, double alpha);
Coefficients make_coefficients(const ExperimentConfig& c);
/// y0(x) = initial(x_1 + ... + x_d).
SpectralField initial_field(const ExperimentConfig& c);
/// Loads `rough_path` when set, otherwise samples the fBm lift for `seed`.
RoughPath make_rough_path(const ExperimentConfig& c, std::uint64_t seed);

/// Runs fn(0..n-1) on up to `jobs` threads; fn writes into its own slot.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Coarse path through every factor-th sample of a fine one (nested refinement).
RoughPath subsample_lift(const RoughPath& fine, std::size_t factor);

/// (e^{lambda X_t} S(t) y0, lambda e^{lambda X_t} S(t) y0): the exact solution
/// for G(y) = lambda y driven by a geometric lift.
ControlledPath geometric_solution(const SpectralField& y0, const RoughPath& X,
                                  const SpaceScale& scale, double lambda, double gamma);

struct OracleLevel {
  std::size_t steps = 0;
  double mean_rel_error = 0.0;
  double max_rel_error = 0.0;
};
/// Linear-G solve against the closed form on nested fBm grids; errors are the
/// max over grid points of |y - exact|_gamma / |exact|_gamma, then mean / max
/// over seeds.
std::vector<OracleLevel> geometric_oracle(const ExperimentConfig& c, unsigned depth, unsigned jobs);

struct SewingSuiteRow {
  unsigned depth = 0;
  SewingProbe probe;
};
/// Pooled sewing probes over the fBm suite (probe_hursts x probe_seeds) for
/// every configured depth and beta, rows ordered by depth then beta.
std::vector<SewingSuiteRow> sewing_suite(const ExperimentConfig& c, unsigned jobs);

struct AmplitudeSweep {
  std::vector<double> lambdas;
  std::vector<double> norms;
  double slope = 0.0;
  double intercept = 0.0;
  double r2_affine = 0.0;
  double quadratic_coefficient = 0.0;  ///< from a least-squares quadratic fit
};
/// Gubinelli norm of (G(lambda y), DG G(lambda y)) for a fixed controlled path
/// (y, y') and the linear torus diffusion of the config.
AmplitudeSweep amplitude_sweep(const ExperimentConfig& c);

}  // namespace rpde::cli
