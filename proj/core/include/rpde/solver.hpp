#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rpde/calculus.hpp"
#include "rpde/coefficients.hpp"
#include "rpde/controlled_path.hpp"
#include "rpde/rough_path.hpp"
#include "rpde/spectral.hpp"

namespace rpde {

struct SolverConfig {
  double gamma = 0.5;
  double alpha = 0.4;
  double sigma = 0.0;
  double delta = 0.0;
  unsigned depth = 0;
  double picard_tol = 1e-8;
  std::size_t max_iters = 50;
  /// Target value of C * h^eta when choosing window lengths.
  double contraction_target = 0.5;
  /// Abort when |y_t|_gamma exceeds ceiling * max(1, |y0|_gamma).
  double blowup_ceiling = 1e12;
  /// Nonzero forces this many windows of (nearly) equal step count.
  std::size_t fixed_windows = 0;
  /// Overrides the measured constant when set.
  std::optional<double> bound_constant;
  SpaceScale scale;

  /// min(alpha - sigma, 1 - delta).
  double eta() const;
  /// Throws InvalidArgument on out-of-range parameters.
  void validate() const;
};

struct WindowRecord {
  std::size_t first = 0;
  std::size_t last = 0;
  double start = 0.0;
  double end = 0.0;
  std::size_t iterations = 0;
  double contraction = 0.0;
  GubNormBreakdown norm;
  double start_norm = 0.0;   ///< |y_start|_gamma
  double sup_norm = 0.0;     ///< sup over the window of |y_t|_gamma
  double bound_constant = 1.0;
};

struct ConstantsLedger {
  double bound_constant = 1.0;       ///< C fed to the window rule
  double pilot_constant = 1.0;       ///< C measured on pilot windows before the solve
  double composition_constant = 0.0; ///< max lhs/rhs of composition_bound_check per window
  double eta = 0.0;
  double window_length = 0.0;
};

struct SolutionRecord {
  ControlledPath trajectory;
  std::vector<WindowRecord> windows;
  ConstantsLedger constants;
  std::vector<double> sup_norm_history;  ///< |y_t|_gamma per grid point
};

struct PicardResult {
  ControlledPath path;
  std::size_t iterations = 0;
  double last_distance = 0.0;
  double contraction = 0.0;
};

/// One application of the mild-solution map on the grid of X:
/// z = S(.) y0 + int S F(y) ds + int S G(y) dX, z' = G(z).
ControlledPath picard_map(const SpectralField& y0, const ControlledPath& current,
                          const Coefficients& coeffs, const RoughPath& X, const SolverConfig& cfg);

/// Fixed point of picard_map on the whole grid of X (one window), starting
/// from (S(.) y0, G(S(.) y0)). `time_offset` is only used in diagnostics.
PicardResult picard_local(const SpectralField& y0, const Coefficients& coeffs, const RoughPath& X,
                          const SolverConfig& cfg, double time_offset = 0.0);

/// (contraction_target / C)^{1/eta} for C clamped to >= 1, capped by the
/// horizon and floored at one grid step.
double window_rule(const SolverConfig& cfg, double bound_constant, double horizon,
                   double grid_step);

/// Constant C in |(y,G(y))| <= C (r + T^eta |(y,G(y))|), r = max(1, |y0|_gamma),
/// measured on pilot solves over the first 2, 4, 8, 16 steps.
double measure_bound_constant(const SpectralField& y0, const Coefficients& coeffs,
                              const RoughPath& X, const SolverConfig& cfg);

/// Window-by-window solve over the whole grid of X.
SolutionRecord global_solve(const SpectralField& y0, const Coefficients& coeffs, const RoughPath& X,
                            const SolverConfig& cfg);

/// max_t |y_t - S(t) y0 - int S F ds - int S G dX|_{gamma - 2 alpha}, each
/// convolution recomputed directly (not recursively) at depth + 1.
double mild_residual(const SolutionRecord& record, const Coefficients& coeffs, const RoughPath& X,
                     const SolverConfig& cfg);

/// Per-grid-point version of mild_residual.
std::vector<double> mild_residual_profile(const SolutionRecord& record, const Coefficients& coeffs,
                                          const RoughPath& X, const SolverConfig& cfg);

struct AprioriFit {
  double m1 = 1.0;
  double m2 = 0.0;
  double m2_half = 0.0;  ///< same fit on the first half of the horizon
  double r = 1.0;
  bool ok = false;
};
/// Fit of sup_{[0,t]} |y|_gamma <= M1 r e^{M2 t}: M1 = max(1, sup over the first
/// window / r), then the smallest M2 >= 0 for the remaining grid points.
/// ok when finite and M2 on [0,T] <= 2 M2 on [0,T/2] + 1 (no super-exponential growth).
AprioriFit apriori_monitor(const SolutionRecord& record);
AprioriFit apriori_monitor(const SolutionRecord& record, double r);

/// |phi(t+tau, w, y0) - phi(t, theta_tau w, phi(tau, w, y0))|_gamma.
double cocycle_check(const SpectralField& y0, const Coefficients& coeffs, const RoughPath& X,
                     std::size_t split, const SolverConfig& cfg);

}  // namespace rpde
