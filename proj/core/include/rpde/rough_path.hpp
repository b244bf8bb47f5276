#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rpde/time_grid.hpp"

namespace rpde {

/// Scalar (d = 1) alpha-Hölder rough path sampled on a grid.
///
/// Only the second-order increments over consecutive grid intervals are
/// stored; any X2(s,t) is recovered through Chen's relation
/// (see chen_reconstruct), so the stored data is Chen-consistent by
/// construction.
class RoughPath {
 public:
  RoughPath() = default;
  RoughPath(TimeGrid grid, std::vector<double> x, std::vector<double> x2_step, double alpha);

  const TimeGrid& grid() const { return grid_; }
  std::span<const double> x() const { return x_; }
  std::span<const double> x2_step() const { return x2_step_; }
  double alpha() const { return alpha_; }
  std::size_t steps() const { return grid_.steps(); }

  double increment(std::size_t s, std::size_t t) const { return x_[t] - x_[s]; }

  /// Second-order part not explained by increment^2 / 2 on interval i.
  /// Zero for geometric lifts.
  double bracket(std::size_t i) const;

  /// Restriction to [t_first, t_last], re-based so that x(first) = 0.
  RoughPath slice(std::size_t first, std::size_t last) const;

  /// Provenance line stored in serialized files (empty for derived paths).
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

 private:
  TimeGrid grid_;
  std::vector<double> x_{0.0};
  std::vector<double> x2_step_;
  double alpha_ = 0.4;
  std::string provenance_;
};

/// Zero rough path on a grid.
RoughPath zero_rough_path(const TimeGrid& grid, double alpha);

/// Canonical (piecewise-linear) lift of a sampled path: x = f - f(0) and
/// x2 over each grid interval equal to increment^2 / 2.
RoughPath canonical_lift_smooth(std::span<const double> samples, const TimeGrid& grid, double alpha);
RoughPath canonical_lift_smooth(const std::function<double(double)>& f, const TimeGrid& grid,
                                double alpha);

/// X2(s,t) assembled through Chen's relation. s == t gives 0.
double chen_reconstruct(const RoughPath& X, std::size_t s, std::size_t t);

/// Row of X2(s, t) for all t >= s, built incrementally in O(n - s).
std::vector<double> chen_row(const RoughPath& X, std::size_t s);

/// Dense (n+1)x(n+1) row-major table with entry [s][t] = X2(s,t) for s <= t.
/// Entries below the diagonal are zero.
std::vector<double> materialize_x2_table(const RoughPath& X);

/// max over s <= u <= t of |X2(s,t) - X2(s,u) - X2(u,t) - X(s,u) X(u,t)|.
/// `table` is row-major (n+1)x(n+1) in the layout of materialize_x2_table.
double chen_defect(std::span<const double> table, std::span<const double> x);

/// Discrete Hölder seminorm sup_{s<t} |v_t - v_s| / (t - s)^theta.
/// `stride` > 1 samples every stride-th index for large grids.
double holder_norm(std::span<const double> values, const TimeGrid& grid, double theta,
                   std::size_t stride = 1);

/// Inhomogeneous alpha-Hölder rough path distance on a common grid.
double rp_distance(const RoughPath& X, const RoughPath& Y);
/// rp_distance(X, 0).
double rho_alpha(const RoughPath& X);
/// sup_{s<t} |X(s,t)| / (t-s)^alpha.
double first_level_holder(const RoughPath& X);
/// sup_{s<t} |X2(s,t)| / (t-s)^{2 alpha}.
double second_level_holder(const RoughPath& X);

/// Time shift: path on [t_s, T] re-based to start at zero (X_{s, s+.}).
RoughPath shift(const RoughPath& X, std::size_t s);

/// Tag written next to seeded fBm samples. Bump when the sampler changes.
inline constexpr const char* kFbmGeneratorVersion = "fbm-davies-harte-mt19937_64-v1";

struct FbmParams {
  double hurst = 0.5;
  std::size_t steps = 256;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  /// Hölder exponent of the lift; negative selects hurst - 0.01.
  double alpha = -1.0;
};

/// Exact fBm marginals on a uniform grid (circulant embedding) with the
/// geometric piecewise-linear lift.
RoughPath fbm_lift(const FbmParams& params);

/// Raw fBm samples B_H(t_i), i = 0..n, on the uniform grid of `params`.
std::vector<double> sample_fbm(const FbmParams& params);

}  // namespace rpde
