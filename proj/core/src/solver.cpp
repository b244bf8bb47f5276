#include "rpde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "rpde/error.hpp"

namespace rpde {

double SolverConfig::eta() const { return std::min(alpha - sigma, 1.0 - delta); }

void SolverConfig::validate() const {
  if (!(alpha > 1.0 / 3.0 && alpha < 0.5)) throw InvalidArgument("alpha must lie in (1/3, 1/2)");
  if (!(sigma >= 0.0 && sigma < alpha)) throw InvalidArgument("sigma must lie in [0, alpha)");
  if (!(delta >= 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in [0, 1)");
  if (!(eta() > 0.0)) throw InvalidArgument("eta = min(alpha - sigma, 1 - delta) must be positive");
  if (!(picard_tol > 0.0)) throw InvalidArgument("picard_tol must be positive");
  if (max_iters == 0) throw InvalidArgument("max_iters must be at least 1");
  if (!(contraction_target > 0.0 && contraction_target < 1.0))
    throw InvalidArgument("contraction_target must lie in (0, 1)");
  if (!(blowup_ceiling > 1.0)) throw InvalidArgument("blowup_ceiling must exceed 1");
  if (depth > 20) throw InvalidArgument("depth above 20 is not supported");
  if (scale.mass < 0.0) throw InvalidArgument("mass shift must be non-negative");
  if (bound_constant && !(*bound_constant > 0.0))
    throw InvalidArgument("bound_constant must be positive");
}

namespace {

void check_state(const SpectralField& y, double t, double gamma, double limit) {
  if (!y.all_finite())
    throw BlowUpError(t, std::numeric_limits<double>::quiet_NaN(), "non-finite state");
  const double n = norm_gamma(y, gamma);
  if (n > limit) throw BlowUpError(t, n, "norm above blow-up ceiling");
}

ControlledPath initial_guess(const SpectralField& y0, const Coefficients& coeffs,
                             const RoughPath& X, const SolverConfig& cfg) {
  ControlledPath p = semigroup_orbit(y0, X, cfg.scale, cfg.gamma);
  for (std::size_t i = 0; i < p.y.size(); ++i) p.y_prime[i] = coeffs.G(p.y[i]);
  return p;
}

PicardResult picard_local_impl(const SpectralField& y0, const Coefficients& coeffs,
                               const RoughPath& X, const SolverConfig& cfg, double time_offset,
                               double blowup_limit) {
  ControlledPath current = initial_guess(y0, coeffs, X, cfg);
  double prev_distance = std::numeric_limits<double>::infinity();
  double contraction = 0.0;
  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    ControlledPath next = picard_map(y0, current, coeffs, X, cfg);
    for (std::size_t j = 0; j < next.y.size(); ++j)
      check_state(next.y[j], time_offset + X.grid()[j], cfg.gamma, blowup_limit);
    const double distance = gubinelli_distance(next, current, X);
    if (std::isfinite(prev_distance) && prev_distance > 0.0) contraction = distance / prev_distance;
    const double scale = std::max(1.0, gubinelli_norm(next, X).total);
    if (distance <= cfg.picard_tol * scale)
      return {std::move(next), iter, distance, contraction};
    prev_distance = distance;
    current = std::move(next);
    if (iter == cfg.max_iters)
      throw NonContractionError(time_offset, time_offset + X.grid().horizon(), prev_distance,
                                distance);
  }
  throw NonContractionError(time_offset, time_offset + X.grid().horizon(), prev_distance,
                            prev_distance);
}

// Window boundaries of an equal-count split into k windows.
std::vector<std::size_t> equal_split(std::size_t steps, std::size_t k) {
  k = std::min(k, steps);
  std::vector<std::size_t> b(k + 1);
  for (std::size_t i = 0; i <= k; ++i) b[i] = (i * steps + k / 2) / k;
  b.back() = steps;
  return b;
}

double bound_ratio(double norm, double r, double length, double eta) {
  return norm / (r + std::pow(length, eta) * norm);
}

}  // namespace

ControlledPath picard_map(const SpectralField& y0, const ControlledPath& current,
                          const Coefficients& coeffs, const RoughPath& X, const SolverConfig& cfg) {
  const auto& grid = X.grid();
  ControlledPath z;
  z.grid = grid;
  z.gamma = cfg.gamma;
  z.alpha = X.alpha();
  z.y.reserve(grid.size());
  z.y.push_back(y0);
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    SpectralField next = semigroup_apply(z.y.back(), grid.step(j), cfg.scale);
    if (coeffs.has_diffusion())
      next += rough_step_increment(coeffs.G(current.y[j]), coeffs.DGG(current.y[j]), X, j,
                                   cfg.scale, cfg.depth);
    if (coeffs.has_drift()) {
      const SpectralField f = coeffs.F(current.y[j]);
      const auto w = semigroup_integral_factors(cfg.scale, grid.step(j));
      for (std::size_t k = 0; k < next.size(); ++k) next[k] += w[k] * f[k];
    }
    z.y.push_back(std::move(next));
  }
  z.y_prime.reserve(z.y.size());
  for (const auto& y : z.y) z.y_prime.push_back(coeffs.G(y));
  return z;
}

PicardResult picard_local(const SpectralField& y0, const Coefficients& coeffs, const RoughPath& X,
                          const SolverConfig& cfg, double time_offset) {
  cfg.validate();
  if (!cfg.scale.matches(y0)) throw GridMismatch("initial state does not match the space scale");
  const double r = std::max(1.0, norm_gamma(y0, cfg.gamma));
  check_state(y0, time_offset, cfg.gamma, cfg.blowup_ceiling * r);
  return picard_local_impl(y0, coeffs, X, cfg, time_offset, cfg.blowup_ceiling * r);
}

double window_rule(const SolverConfig& cfg, double bound_constant, double horizon,
                   double grid_step) {
  const double c = std::max(1.0, bound_constant);
  double h = std::pow(cfg.contraction_target / c, 1.0 / cfg.eta());
  h = std::min(h, horizon);
  return std::max(h, std::min(grid_step, horizon));
}

double measure_bound_constant(const SpectralField& y0, const Coefficients& coeffs,
                              const RoughPath& X, const SolverConfig& cfg) {
  const double r = std::max(1.0, norm_gamma(y0, cfg.gamma));
  double c = 1.0;
  for (std::size_t len = 2; len <= 16; len *= 2) {
    const std::size_t last = std::min(len, X.steps());
    const RoughPath pilot = X.slice(0, last);
    const auto sol = picard_local(y0, coeffs, pilot, cfg);
    const double n = gubinelli_norm(sol.path, pilot).total;
    c = std::max(c, bound_ratio(n, r, pilot.grid().horizon(), cfg.eta()));
    if (last == X.steps()) break;
  }
  return c;
}

SolutionRecord global_solve(const SpectralField& y0, const Coefficients& coeffs, const RoughPath& X,
                            const SolverConfig& cfg) {
  cfg.validate();
  if (!cfg.scale.matches(y0)) throw GridMismatch("initial state does not match the space scale");
  if (std::abs(cfg.alpha - X.alpha()) > 1e-15)
    throw InvalidArgument("solver alpha differs from the rough path's alpha");

  const auto& grid = X.grid();
  const double eta = cfg.eta();
  const double r = std::max(1.0, norm_gamma(y0, cfg.gamma));
  const double limit = cfg.blowup_ceiling * r;

  SolutionRecord rec;
  rec.trajectory.grid = grid;
  rec.trajectory.gamma = cfg.gamma;
  rec.trajectory.alpha = X.alpha();
  rec.constants.eta = eta;

  auto push_history = [&](const SpectralField& y) {
    rec.sup_norm_history.push_back(norm_gamma(y, cfg.gamma));
  };

  double c = 1.0;
  try {
    check_state(y0, 0.0, cfg.gamma, limit);
    rec.constants.pilot_constant =
        cfg.bound_constant ? *cfg.bound_constant : measure_bound_constant(y0, coeffs, X, cfg);
    c = std::max(1.0, rec.constants.pilot_constant);

    std::vector<std::size_t> fixed;
    if (cfg.fixed_windows > 0) fixed = equal_split(grid.steps(), cfg.fixed_windows);

    rec.trajectory.y.push_back(y0);
    rec.trajectory.y_prime.push_back(coeffs.G(y0));
    push_history(y0);

    std::size_t start = 0;
    std::size_t window_index = 0;
    while (start < grid.steps()) {
      const SpectralField& state = rec.trajectory.y.back();
      std::size_t end;
      if (!fixed.empty()) {
        end = fixed[window_index + 1];
      } else {
        const double h = window_rule(cfg, c, grid.horizon() - grid[start], grid.step(start));
        end = std::max(start + 1, grid.index_at_or_before(grid[start] + h));
        end = std::min(end, grid.steps());
      }
      const RoughPath Xw = X.slice(start, end);
      PicardResult sol = picard_local_impl(state, coeffs, Xw, cfg, grid[start], limit);

      WindowRecord w;
      w.first = start;
      w.last = end;
      w.start = grid[start];
      w.end = grid[end];
      w.iterations = sol.iterations;
      w.contraction = sol.contraction;
      w.norm = gubinelli_norm(sol.path, Xw);
      w.start_norm = norm_gamma(state, cfg.gamma);
      w.sup_norm = sup_norm(sol.path.y, cfg.gamma);

      const double rs = std::max(1.0, w.start_norm);
      const double ratio = bound_ratio(w.norm.total, rs, w.end - w.start, eta);
      if (fixed.empty() && !cfg.bound_constant && ratio > c * (1.0 + 1e-9) && end > start + 1) {
        // The pilot constant underestimated this stretch: raise C and retry shorter.
        c = ratio;
        continue;
      }
      c = std::max(c, fixed.empty() ? c : ratio);
      w.bound_constant = c;
      if (coeffs.has_diffusion()) {
        const auto comp = composition_bound_check(sol.path, coeffs, Xw);
        rec.constants.composition_constant =
            std::max(rec.constants.composition_constant, comp.ratio());
      }
      for (std::size_t j = 1; j < sol.path.y.size(); ++j) {
        push_history(sol.path.y[j]);
        rec.trajectory.y.push_back(std::move(sol.path.y[j]));
        rec.trajectory.y_prime.push_back(std::move(sol.path.y_prime[j]));
      }
      rec.windows.push_back(std::move(w));
      start = end;
      ++window_index;
    }
  } catch (BlowUpError& e) {
    e.history = rec.sup_norm_history;
    throw;
  }
  rec.constants.bound_constant = c;
  rec.constants.window_length = window_rule(cfg, c, grid.horizon(), grid.step(0));
  return rec;
}

std::vector<double> mild_residual_profile(const SolutionRecord& record, const Coefficients& coeffs,
                                          const RoughPath& X, const SolverConfig& cfg) {
  const auto& traj = record.trajectory;
  const auto& grid = X.grid();
  const double level = cfg.gamma - 2.0 * X.alpha();
  const ControlledPath integrand = compose_G(traj, coeffs);
  std::vector<SpectralField> f_values;
  if (coeffs.has_drift()) {
    f_values.reserve(traj.y.size());
    for (const auto& y : traj.y) f_values.push_back(coeffs.F(y));
  }
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t t = 0; t < grid.size(); ++t) {
    SpectralField res = traj.y[t];
    res -= semigroup_apply(traj.y.front(), grid[t], cfg.scale);
    if (coeffs.has_drift()) res -= drift_convolution_from_values(f_values, grid, cfg.scale, t);
    if (coeffs.has_diffusion()) res -= rough_convolution(integrand, X, cfg.scale, t, cfg.depth + 1);
    out[t] = norm_gamma(res, level);
  }
  return out;
}

double mild_residual(const SolutionRecord& record, const Coefficients& coeffs, const RoughPath& X,
                     const SolverConfig& cfg) {
  const auto prof = mild_residual_profile(record, coeffs, X, cfg);
  return *std::max_element(prof.begin(), prof.end());
}

namespace {

double fit_rate(std::span<const double> running_sup, const TimeGrid& grid, std::size_t from,
                std::size_t to, double m1, double r) {
  double m2 = 0.0;
  for (std::size_t i = std::max<std::size_t>(from, 1); i <= to; ++i) {
    const double q = running_sup[i] / (m1 * r);
    if (q > 1.0) m2 = std::max(m2, std::log(q) / grid[i]);
  }
  return m2;
}

}  // namespace

AprioriFit apriori_monitor(const SolutionRecord& record) {
  const double y0 = record.sup_norm_history.empty() ? 0.0 : record.sup_norm_history.front();
  return apriori_monitor(record, std::max(1.0, y0));
}

AprioriFit apriori_monitor(const SolutionRecord& record, double r) {
  AprioriFit fit;
  fit.r = r;
  const auto& hist = record.sup_norm_history;
  const auto& grid = record.trajectory.grid;
  if (hist.empty() || record.windows.empty()) return fit;
  std::vector<double> running(hist.size());
  std::partial_sum(hist.begin(), hist.end(), running.begin(),
                   [](double a, double b) { return std::max(a, b); });
  const std::size_t first_end = record.windows.front().last;
  // M1 absorbs the first window, where the bound holds with the short-time constant.
  fit.m1 = std::max(1.0, running[first_end] / r);
  const std::size_t n = hist.size() - 1;
  fit.m2 = fit_rate(running, grid, first_end + 1, n, fit.m1, r);
  fit.m2_half = fit_rate(running, grid, first_end + 1, grid.index_at_or_before(grid.horizon() / 2),
                         fit.m1, r);
  fit.ok = std::isfinite(fit.m1) && std::isfinite(fit.m2) && fit.m2 <= 2.0 * fit.m2_half + 1.0;
  return fit;
}

double cocycle_check(const SpectralField& y0, const Coefficients& coeffs, const RoughPath& X,
                     std::size_t split, const SolverConfig& cfg) {
  if (split >= X.steps())
    throw InvalidArgument("cocycle split must be a grid index before the horizon");
  const auto whole = global_solve(y0, coeffs, X, cfg);
  SpectralField mid = y0;
  if (split > 0) mid = global_solve(y0, coeffs, X.slice(0, split), cfg).trajectory.y.back();
  const auto rest = global_solve(mid, coeffs, shift(X, split), cfg);
  return norm_gamma(whole.trajectory.y.back() - rest.trajectory.y.back(), cfg.gamma);
}

}  // namespace rpde
