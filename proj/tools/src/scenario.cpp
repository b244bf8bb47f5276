#include "rpde_cli/scenario.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rpde/error.hpp"
#include "rpde/expression.hpp"
#include "rpde/io.hpp"
#include "rpde_cli/config.hpp"

namespace rpde::cli {

SpaceScale space_scale(const ExperimentConfig& c) { return {c.dim, c.cutoff, c.mass}; }

SolverConfig solver_config(const ExperimentConfig& c, double alpha) {
  SolverConfig s;
  s.gamma = c.gamma;
  s.alpha = alpha;
  s.sigma = c.preset == "linear_g" ? 0.0 : c.sigma;
  s.delta = c.delta;
  s.depth = c.depth;
  s.picard_tol = c.picard_tol;
  s.max_iters = c.max_iters;
  s.contraction_target = c.contraction_target;
  s.blowup_ceiling = c.blowup_ceiling;
  s.fixed_windows = c.fixed_windows;
  s.bound_constant = c.bound_constant;
  s.scale = space_scale(c);
  return s;
}

namespace {

SpectralField multiplier(const ExperimentConfig& c) {
  const double lam = c.lambda;
  return field_from_function(c.dim, c.cutoff, [lam](std::span<const double> x) {
    return lam * (1.0 + 0.5 * std::cos(x[0]));
  });
}

Coefficients add_drift(Coefficients base, const std::string& expr) {
  if (expr.empty()) return base;
  return with_pointwise_drift(std::move(base), Expression(expr));
}

}  // namespace

Coefficients make_coefficients(const ExperimentConfig& c) {
  if (c.preset == "linear_g") {
    auto co = scalar_linear_diffusion(c.lambda);
    return add_drift(std::move(co), c.drift);
  }
  if (c.preset == "torus_example" || c.preset == "custom") {
    const std::string f = c.drift.empty() ? std::string("0.5*sin(u)") : c.drift;
    auto co = with_linear_diffusion(add_drift(zero_coefficients(), f), multiplier(c), c.sigma);
    co.name = c.preset;
    return co;
  }
  if (c.preset == "unsafe_quadratic") {
    // G(y) = lambda y^2 pointwise: grows quadratically, outside the theory.
    Coefficients co = add_drift(zero_coefficients(), c.drift);
    const double lam = c.lambda;
    co.diffusion = [lam](const SpectralField& y) {
      return apply_pointwise(y, [lam](double u) { return lam * u * u; });
    };
    co.diffusion_derivative = [lam](const SpectralField& y, const SpectralField& v) {
      SpectralField out = multiply_smooth(v, y);
      for (auto& z : out.coeffs()) z *= 2.0 * lam;
      return out;
    };
    co.name = "unsafe_quadratic";
    return co;
  }
  throw ConfigError("unknown preset '" + c.preset + "'");
}

SpectralField initial_field(const ExperimentConfig& c) {
  const Expression e(c.initial);
  return field_from_function(c.dim, c.cutoff, [&e](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return e(s);
  });
}

RoughPath make_rough_path(const ExperimentConfig& c, std::uint64_t seed) {
  if (!c.rough_path.empty()) return io::load_rough_path(c.rough_path);
  return fbm_lift({c.hurst, c.steps, c.horizon, seed, c.effective_alpha()});
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

RoughPath subsample_lift(const RoughPath& fine, std::size_t factor) {
  if (factor == 0 || fine.steps() % factor != 0)
    throw InvalidArgument("subsample_lift: factor must divide the step count");
  std::vector<double> t, x;
  for (std::size_t i = 0; i <= fine.steps(); i += factor) {
    t.push_back(fine.grid()[i]);
    x.push_back(fine.x()[i]);
  }
  RoughPath X = canonical_lift_smooth(x, TimeGrid(std::move(t)), fine.alpha());
  X.set_provenance(fine.provenance() + " subsample=" + std::to_string(factor));
  return X;
}

ControlledPath geometric_solution(const SpectralField& y0, const RoughPath& X,
                                  const SpaceScale& scale, double lambda, double gamma) {
  ControlledPath p;
  p.grid = X.grid();
  p.gamma = gamma;
  p.alpha = X.alpha();
  for (std::size_t i = 0; i < X.grid().size(); ++i) {
    SpectralField y = semigroup_apply(y0, X.grid()[i], scale);
    const double e = std::exp(lambda * (X.x()[i] - X.x()[0]));
    for (auto& z : y.coeffs()) z *= e;
    SpectralField yp = y;
    for (auto& z : yp.coeffs()) z *= lambda;
    p.y.push_back(std::move(y));
    p.y_prime.push_back(std::move(yp));
  }
  return p;
}

std::vector<OracleLevel> geometric_oracle(const ExperimentConfig& c, unsigned depth, unsigned jobs) {
  const auto& levels = c.refinement_steps;
  const std::size_t finest = levels.back();
  const double alpha = c.oracle_hurst - 0.01;
  const SpaceScale scale = space_scale(c);
  const SpectralField y0 = initial_field(c);
  const Coefficients coeffs = scalar_linear_diffusion(c.oracle_lambda);
  SolverConfig cfg = solver_config(c, alpha);
  cfg.sigma = 0.0;
  cfg.depth = depth;
  cfg.fixed_windows = 0;
  cfg.bound_constant.reset();

  std::vector<std::vector<double>> err(c.oracle_seeds, std::vector<double>(levels.size()));
  parallel_for(c.oracle_seeds, jobs, [&](std::size_t s) {
    const RoughPath fine = fbm_lift({c.oracle_hurst, finest, c.horizon, c.seed + s, alpha});
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const RoughPath X = subsample_lift(fine, finest / levels[l]);
      const auto rec = global_solve(y0, coeffs, X, cfg);
      const auto exact = geometric_solution(y0, X, scale, c.oracle_lambda, c.gamma);
      double worst = 0.0;
      for (std::size_t i = 0; i < exact.y.size(); ++i)
        worst = std::max(worst, norm_gamma(rec.trajectory.y[i] - exact.y[i], c.gamma) /
                                    norm_gamma(exact.y[i], c.gamma));
      err[s][l] = worst;
    }
  });
  std::vector<OracleLevel> out(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    out[l].steps = levels[l];
    for (std::size_t s = 0; s < c.oracle_seeds; ++s) {
      out[l].mean_rel_error += err[s][l] / static_cast<double>(c.oracle_seeds);
      out[l].max_rel_error = std::max(out[l].max_rel_error, err[s][l]);
    }
  }
  return out;
}

std::vector<SewingSuiteRow> sewing_suite(const ExperimentConfig& c, unsigned jobs) {
  const SpaceScale scale = space_scale(c);
  const SpectralField y0 = initial_field(c);
  std::vector<RoughPath> paths;
  std::vector<ControlledPath> integrands;
  for (double h : c.probe_hursts)
    for (std::size_t s = 0; s < c.probe_seeds; ++s)
      paths.push_back(fbm_lift({h, c.probe_steps, c.horizon, c.seed + s, c.probe_alpha}));
  for (const auto& X : paths)
    integrands.push_back(geometric_solution(y0, X, scale, c.probe_lambda, c.gamma));

  const auto betas = c.effective_betas();
  std::vector<SewingSuiteRow> rows(c.depths.size() * betas.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const unsigned depth = c.depths[i / betas.size()];
    rows[i].depth = depth;
    rows[i].probe = sewing_error_probe_suite(integrands, paths, scale, betas[i % betas.size()],
                                             depth, c.max_window_steps);
  });
  return rows;
}

AmplitudeSweep amplitude_sweep(const ExperimentConfig& c) {
  const SpaceScale scale = space_scale(c);
  const RoughPath X = fbm_lift({c.hurst, c.steps, c.horizon, c.seed, c.effective_alpha()});
  const ControlledPath base = geometric_solution(initial_field(c), X, scale, 1.0, c.gamma);
  ExperimentConfig unit = c;
  unit.lambda = 1.0;
  const Coefficients G = with_linear_diffusion(zero_coefficients(), multiplier(unit), c.sigma);

  AmplitudeSweep sweep;
  sweep.lambdas = c.amplitudes;
  for (double lam : c.amplitudes) {
    ControlledPath p = base;
    for (auto& y : p.y) for (auto& z : y.coeffs()) z *= lam;
    for (auto& y : p.y_prime) for (auto& z : y.coeffs()) z *= lam;
    sweep.norms.push_back(gubinelli_norm(compose_G(p, G), X).total);
  }

  const auto m = static_cast<Eigen::Index>(sweep.lambdas.size());
  Eigen::VectorXd y(m);
  Eigen::MatrixXd A(m, 2), Q(m, 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = sweep.lambdas[static_cast<std::size_t>(i)];
    y(i) = sweep.norms[static_cast<std::size_t>(i)];
    A.row(i) << 1.0, l;
    Q.row(i) << 1.0, l, l * l;
  }
  const Eigen::VectorXd affine = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd quad = Q.colPivHouseholderQr().solve(y);
  sweep.intercept = affine(0);
  sweep.slope = affine(1);
  sweep.quadratic_coefficient = quad(2);
  const double ss_res = (y - A * affine).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  sweep.r2_affine = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return sweep;
}

}  // namespace rpde::cli
