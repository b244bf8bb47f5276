#pragma once

#include <cstddef>
#include <vector>

#include "rpde/rough_path.hpp"
#include "rpde/spectral.hpp"

namespace rpde {

/// Pair (y, y') of field-valued paths on a time grid, controlled by a rough
/// path with the same grid. The remainder is never stored; it is derived
/// from (y, y', X) on demand.
struct ControlledPath {
  TimeGrid grid;
  std::vector<SpectralField> y;
  std::vector<SpectralField> y_prime;
  double gamma = 0.0;
  double alpha = 0.4;

  std::size_t steps() const { return grid.steps(); }
  /// Throws InvalidArgument unless sizes and field shapes are consistent.
  void validate() const;

  ControlledPath slice(std::size_t first, std::size_t last) const;
};

/// y_t - y_s - y'_s X_{s,t}.
SpectralField remainder(const ControlledPath& p, const RoughPath& X, std::size_t s, std::size_t t);

/// The five terms of the controlled-path norm.
struct GubNormBreakdown {
  double sup_y = 0.0;    ///< sup_t |y_t|_gamma
  double sup_yp = 0.0;   ///< sup_t |y'_t|_{gamma - alpha}
  double hol_yp = 0.0;   ///< alpha-Hölder seminorm of y' in B_{gamma - 2 alpha}
  double hol_R = 0.0;    ///< alpha-Hölder seminorm of R^y in B_{gamma - alpha}
  double hol2_R = 0.0;   ///< 2 alpha-Hölder seminorm of R^y in B_{gamma - 2 alpha}
  double total = 0.0;
};

/// All O(n^2) grid pairs are visited unless `stride` > 1.
GubNormBreakdown gubinelli_norm(const ControlledPath& p, const RoughPath& X, std::size_t stride = 1);

/// Norm of (y - z, y' - z') for two paths on the same grid and scale.
double gubinelli_distance(const ControlledPath& a, const ControlledPath& b, const RoughPath& X);

/// Field-valued Hölder seminorm sup_{s<t} |v_t - v_s|_gamma / (t-s)^theta.
double holder_norm(const std::vector<SpectralField>& values, const TimeGrid& grid, double theta,
                   double gamma, std::size_t stride = 1);

/// sup_t |v_t|_gamma.
double sup_norm(const std::vector<SpectralField>& values, double gamma);

struct HolderBoundPair {
  double theta = 0.0;
  double lhs = 0.0;  ///< ||y||_{alpha, gamma - theta}
  double rhs = 0.0;  ///< ||y'||_{inf, gamma - theta} ||X||_alpha + ||R||_{alpha, gamma - theta}
};
/// Evaluates both sides of the Hölder estimate for y at theta = alpha and 2 alpha.
std::vector<HolderBoundPair> holder_bound_check(const ControlledPath& p, const RoughPath& X);

}  // namespace rpde
