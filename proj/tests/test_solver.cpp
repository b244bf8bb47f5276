#include <catch_amalgamated.hpp>

#include <cmath>

#include "generators.hpp"
#include "rpde/error.hpp"
#include "rpde/solver.hpp"

using namespace rpde;
using Catch::Approx;

namespace {

SolverConfig config(std::size_t cutoff, double alpha, double mass = 0.0) {
  SolverConfig c;
  c.alpha = alpha;
  c.scale = {1, cutoff, mass};
  return c;
}

SpectralField initial(std::size_t cutoff) {
  return field_from_function(1, cutoff, [](std::span<const double> x) {
    return std::sin(x[0]) + 0.5 * std::cos(2.0 * x[0]);
  });
}

SpectralField single_mode(std::size_t cutoff) {
  SpectralField u(1, cutoff);
  u.at({1}) = u.at({-1}) = 1.0;
  return u;
}

// Exact solution of dy = A y dt + lambda y dX for geometric X.
double oracle_error(const SolutionRecord& rec, const SpectralField& y0, const RoughPath& X,
                    const SolverConfig& cfg, double lambda) {
  double err = 0.0;
  for (std::size_t i = 0; i <= X.steps(); ++i) {
    const auto exact = std::exp(lambda * X.x()[i]) * semigroup_apply(y0, X.grid()[i], cfg.scale);
    err = std::max(err, norm_gamma(rec.trajectory.y[i] - exact, cfg.gamma));
  }
  return err / std::max(1.0, norm_gamma(y0, cfg.gamma));
}

double trajectory_gap(const ControlledPath& a, const ControlledPath& b, double gamma) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.y.size(); ++i) d = std::max(d, norm_gamma(a.y[i] - b.y[i], gamma));
  return d;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c = config(4, 0.4);
  CHECK_NOTHROW(c.validate());
  CHECK(c.eta() == Approx(0.4));
  auto bad = [&](auto edit) {
    SolverConfig b = c;
    edit(b);
    CHECK_THROWS_AS(b.validate(), InvalidArgument);
  };
  bad([](SolverConfig& b) { b.alpha = 1.0 / 3.0; });
  bad([](SolverConfig& b) { b.alpha = 0.5; });
  bad([](SolverConfig& b) { b.sigma = 0.4; });
  bad([](SolverConfig& b) { b.delta = 1.0; });
  bad([](SolverConfig& b) { b.picard_tol = 0.0; });
  bad([](SolverConfig& b) { b.max_iters = 0; });
  bad([](SolverConfig& b) { b.contraction_target = 1.0; });
  bad([](SolverConfig& b) { b.blowup_ceiling = 1.0; });
  bad([](SolverConfig& b) { b.scale.mass = -1.0; });
  bad([](SolverConfig& b) { b.bound_constant = 0.0; });
}

TEST_CASE("window rule") {
  SolverConfig c = config(4, 0.4);
  CHECK(window_rule(c, 0.5, 10.0, 1e-6) == window_rule(c, 1.0, 10.0, 1e-6));
  CHECK(window_rule(c, 1.0, 10.0, 1e-6) == Approx(std::pow(0.5, 1.0 / 0.4)));
  CHECK(window_rule(c, 4.0, 10.0, 1e-6) == Approx(std::pow(0.125, 1.0 / 0.4)));
  CHECK(window_rule(c, 1.0, 0.01, 1e-6) == 0.01);
  CHECK(window_rule(c, 1e9, 10.0, 1e-3) == 1e-3);

  // eta = 1/2 is only approached: alpha stays below 1/2.
  SolverConfig near = config(4, 0.5 - 1e-9);
  near.delta = 0.5;
  CHECK(window_rule(near, 1.0, 10.0, 1e-6) == Approx(0.25).epsilon(1e-7));

  // Halving the target divides h by 2^{1/eta}.
  SolverConfig tight = c;
  tight.contraction_target = 0.25;
  CHECK(window_rule(c, 2.0, 10.0, 1e-9) / window_rule(tight, 2.0, 10.0, 1e-9) ==
        Approx(std::pow(2.0, 1.0 / 0.4)));
}

TEST_CASE("picard: homogeneous linear case") {
  SolverConfig cfg = config(4, 0.4);
  const RoughPath X = fbm_lift({0.45, 32, 1.0, 1, 0.4});
  const auto y0 = initial(4);
  const auto res = picard_local(y0, zero_coefficients(), X, cfg);
  CHECK(res.iterations == 1);
  for (std::size_t i = 0; i <= 32; ++i)
    CHECK(norm_gamma(res.path.y[i] - semigroup_apply(y0, X.grid()[i], cfg.scale), 0.5) < 1e-14);
}

TEST_CASE("picard: F = Id balances the decay of a unit mode") {
  SolverConfig cfg = config(3, 0.4);
  const RoughPath X = fbm_lift({0.45, 32, 1.0, 2, 0.4});
  const auto y0 = single_mode(3);
  const auto rec = global_solve(y0, with_linear_drift(zero_coefficients(), 1.0), X, cfg);
  for (const auto& y : rec.trajectory.y) CHECK(y.at({1}).real() == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("global solve with F = G = 0 is the semigroup orbit") {
  SolverConfig cfg = config(5, 0.4);
  const RoughPath X = fbm_lift({0.45, 128, 2.0, 3, 0.4});
  const auto y0 = initial(5);
  const auto rec = global_solve(y0, zero_coefficients(), X, cfg);
  CHECK(rec.windows.size() >= 1);
  for (std::size_t i = 0; i <= 128; i += 8)
    CHECK(trajectory_gap(ControlledPath{X.grid(), {rec.trajectory.y[i]}, {}, 0.5, 0.4},
                         ControlledPath{X.grid(), {semigroup_apply(y0, X.grid()[i], cfg.scale)}, {}, 0.5, 0.4},
                         0.5) < 1e-14);
  CHECK(mild_residual(rec, zero_coefficients(), X, cfg) < 1e-12);
}

TEST_CASE("geometric oracle on short runs") {
  const double lambda = 0.5;
  SolverConfig cfg = config(6, 0.44);
  const auto y0 = initial(6);
  const Coefficients G = scalar_linear_diffusion(lambda);
  double coarse = 0.0, fine = 0.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const RoughPath X = fbm_lift({0.45, 256, 1.0, seed, 0.44});
    std::vector<double> sub;
    for (std::size_t i = 0; i <= 256; i += 4) sub.push_back(X.x()[i]);
    const RoughPath Xc = canonical_lift_smooth(sub, X.grid().coarsened(4), 0.44);
    coarse += oracle_error(global_solve(y0, G, Xc, cfg), y0, Xc, cfg, lambda);
    fine += oracle_error(global_solve(y0, G, X, cfg), y0, X, cfg, lambda);
  }
  CHECK(fine < coarse);
  CHECK(fine / 4.0 < 5e-3);
}

TEST_CASE("window splitting and solution structure") {
  const double lambda = 0.5;
  const RoughPath X = fbm_lift({0.45, 128, 1.0, 5, 0.44});
  const auto y0 = initial(6);
  const Coefficients G = scalar_linear_diffusion(lambda);
  SolverConfig cfg = config(6, 0.44);

  cfg.fixed_windows = 1;
  const auto one = global_solve(y0, G, X, cfg);
  cfg.fixed_windows = 2;
  const auto two = global_solve(y0, G, X, cfg);
  cfg.fixed_windows = 4;
  const auto four = global_solve(y0, G, X, cfg);
  cfg.fixed_windows = 8;
  const auto eight = global_solve(y0, G, X, cfg);
  CHECK(four.windows.size() == 4);
  CHECK(trajectory_gap(one.trajectory, four.trajectory, cfg.gamma) < 1e-6);
  const double tol10 = 10.0 * cfg.picard_tol * std::max(1.0, norm_gamma(y0, cfg.gamma));
  CHECK(trajectory_gap(one.trajectory, two.trajectory, cfg.gamma) < tol10);
  CHECK(trajectory_gap(two.trajectory, four.trajectory, cfg.gamma) < tol10);
  CHECK(trajectory_gap(four.trajectory, eight.trajectory, cfg.gamma) < tol10);

  // Windows tile the grid and the state carries over exactly.
  for (const auto* rec : {&two, &four, &eight}) {
    CHECK(rec->windows.front().first == 0);
    CHECK(rec->windows.back().last == 128);
    for (std::size_t k = 1; k < rec->windows.size(); ++k)
      CHECK(rec->windows[k].first == rec->windows[k - 1].last);
    CHECK(rec->trajectory.y.size() == 129);
    CHECK(rec->sup_norm_history.size() == 129);
  }

  // y' = G(y) field by field.
  for (std::size_t i = 0; i <= 128; ++i) CHECK(four.trajectory.y_prime[i] == G.G(four.trajectory.y[i]));

  // Residual does not depend on the segmentation.
  const double r2 = mild_residual(two, G, X, cfg), r4 = mild_residual(four, G, X, cfg);
  CHECK(r2 < 10.0 * cfg.picard_tol);
  CHECK(r4 < 10.0 * cfg.picard_tol);
  CHECK(mild_residual_profile(four, G, X, cfg).size() == 129);
}

TEST_CASE("adaptive windows obey the a priori growth bound") {
  SolverConfig cfg = config(8, 0.44);
  const RoughPath X = fbm_lift({0.45, 256, 1.0, 11, 0.44});
  const auto y0 = initial(8);
  const Coefficients G = with_pointwise_drift(scalar_linear_diffusion(0.5), [](double u) { return 0.5 * std::sin(u); });
  const auto rec = global_solve(y0, G, X, cfg);
  const double C = rec.constants.bound_constant;
  CHECK(C >= 1.0);
  const double r = std::max(1.0, norm_gamma(y0, cfg.gamma));
  for (std::size_t k = 0; k < rec.windows.size(); ++k)
    CHECK(rec.windows[k].sup_norm <= std::pow(2.0 * C, static_cast<double>(k + 1)) * r);
  CHECK(mild_residual(rec, G, X, cfg) < 10.0 * cfg.picard_tol);
}

TEST_CASE("fixed-point property of a converged solution") {
  SolverConfig cfg = config(6, 0.44);
  const RoughPath X = fbm_lift({0.45, 96, 1.0, 8, 0.44});
  const auto y0 = initial(6);
  const Coefficients G = scalar_linear_diffusion(0.7);
  cfg.fixed_windows = 1;
  const auto rec = global_solve(y0, G, X, cfg);
  const auto again = picard_map(y0, rec.trajectory, G, X, cfg);
  CHECK(gubinelli_distance(again, rec.trajectory, X) <
        cfg.picard_tol * std::max(1.0, gubinelli_norm(rec.trajectory, X).total));
}

TEST_CASE("a priori monitor") {
  const RoughPath X = fbm_lift({0.45, 128, 2.0, 13, 0.44});
  SolverConfig cfg = config(6, 0.44);
  auto y0 = initial(6);
  y0 *= 3.0;

  const auto free = apriori_monitor(global_solve(y0, zero_coefficients(), X, cfg));
  CHECK(free.m1 == 1.0);
  CHECK(free.m2 == 0.0);
  CHECK(free.ok);

  const Coefficients G = scalar_linear_diffusion(1.0);
  const auto base = apriori_monitor(global_solve(y0, G, X, cfg));
  const auto doubled = apriori_monitor(global_solve(2.0 * y0, G, X, cfg));
  CHECK(doubled.r == Approx(2.0 * base.r));
  CHECK(doubled.m1 == Approx(base.m1).epsilon(1e-9));
  CHECK(doubled.m2 == Approx(base.m2).margin(1e-9));

  double last = -1.0;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto fit = apriori_monitor(global_solve(y0, scalar_linear_diffusion(lambda), X, cfg));
    CHECK(fit.ok);
    CHECK(fit.m2 >= last);
    last = fit.m2;
  }
}

TEST_CASE("cocycle property") {
  const RoughPath X = fbm_lift({0.45, 128, 1.0, 17, 0.44});
  SolverConfig cfg = config(6, 0.44);
  const auto y0 = initial(6);
  const Coefficients G = with_pointwise_drift(scalar_linear_diffusion(0.5), [](double u) { return 0.5 * std::sin(u); });
  CHECK(cocycle_check(y0, G, X, 0, cfg) == 0.0);
  CHECK(cocycle_check(y0, zero_coefficients(), X, 64, cfg) < 1e-14);
  CHECK(cocycle_check(y0, G, X, 64, cfg) < 1e-6);
  CHECK(cocycle_check(y0, G, X, 37, cfg) < 1e-6);
  CHECK_THROWS_AS(cocycle_check(y0, G, X, 128, cfg), InvalidArgument);
}

TEST_CASE("diagnostics: non-contraction and blow-up") {
  const RoughPath X = fbm_lift({0.45, 64, 1.0, 19, 0.44});
  SolverConfig cfg = config(4, 0.44);
  cfg.max_iters = 1;
  CHECK_THROWS_AS(global_solve(initial(4), scalar_linear_diffusion(1.0), X, cfg), NonContractionError);

  SolverConfig hot = config(4, 0.44);
  const RoughPath long_x = fbm_lift({0.45, 256, 2.0, 19, 0.44});
  try {
    global_solve(initial(4), with_linear_drift(zero_coefficients(), 50.0), long_x, hot);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.norm > 1e12);
    CHECK(!e.history.empty());
    CHECK(e.time > 0.0);
    CHECK(e.time <= 2.0);
  }

  auto nan_field = initial(4);
  nan_field[3] = std::nan("");
  CHECK_THROWS(global_solve(nan_field, zero_coefficients(), X, hot));
}
