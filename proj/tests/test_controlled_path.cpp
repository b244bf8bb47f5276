#include <catch_amalgamated.hpp>

#include <cmath>

#include "generators.hpp"
#include "rpde/controlled_path.hpp"
#include "rpde/error.hpp"

using namespace rpde;
using Catch::Approx;

namespace {

// y_t = a + v X_t + w X_t^2 / 2 with y'_t = v + w X_t: remainder w (X_{s,t})^2 / 2.
ControlledPath polynomial_path(const RoughPath& X, const SpectralField& a, const SpectralField& v,
                               const SpectralField& w, double gamma) {
  ControlledPath p{X.grid(), {}, {}, gamma, X.alpha()};
  for (double x : X.x()) {
    p.y.push_back(a + x * v + (0.5 * x * x) * w);
    p.y_prime.push_back(v + x * w);
  }
  return p;
}

ControlledPath random_path(gen::Rng& r, const RoughPath& X, std::size_t cutoff) {
  const auto a = gen::real_field(r, 1, cutoff), v = gen::real_field(r, 1, cutoff),
             w = gen::real_field(r, 1, cutoff);
  return polynomial_path(X, a, v, w, r.uniform(0.0, 1.0));
}

}  // namespace

TEST_CASE("validation of controlled paths") {
  const RoughPath X = fbm_lift({0.45, 8, 1.0, 1});
  ControlledPath p = polynomial_path(X, SpectralField(1, 2), SpectralField(1, 2), SpectralField(1, 2), 0.5);
  CHECK_NOTHROW(p.validate());
  p.y_prime.pop_back();
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.y_prime.push_back(SpectralField(1, 3));
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("remainder examples") {
  gen::Rng r(1);
  const RoughPath X = fbm_lift({0.4, 32, 1.0, 3});
  const auto v = gen::real_field(r, 1, 3);
  const SpectralField zero(1, 3);
  const auto p = polynomial_path(X, zero, v, zero, 0.5);
  for (std::size_t s = 0; s <= 32; s += 5) {
    CHECK(norm_gamma(remainder(p, X, s, s), 0.0) == 0.0);
    for (std::size_t t = s; t <= 32; t += 3) CHECK(norm_gamma(remainder(p, X, s, t), 0.0) < 1e-14);
  }
  const auto q = polynomial_path(X, zero, zero, v, 0.5);
  const double dx = X.increment(4, 20);
  const auto R = remainder(q, X, 4, 20);
  CHECK(norm_gamma(R - (0.5 * dx * dx) * v, 0.0) < 1e-14);
}

TEST_CASE("norm examples") {
  const RoughPath X = fbm_lift({0.45, 16, 1.0, 2});
  const SpectralField zero(2, 2);
  const auto z = gubinelli_norm(polynomial_path(X, zero, zero, zero, 0.5), X);
  CHECK(z.total == 0.0);

  gen::Rng r(4);
  const auto v = gen::real_field(r, 2, 2);
  const auto c = gubinelli_norm(polynomial_path(X, v, zero, zero, 0.5), X);
  CHECK(c.total == Approx(norm_gamma(v, 0.5)).epsilon(1e-14));
  CHECK(c.hol_R == 0.0);

  const auto p = random_path(r, X, 3);
  const auto b = gubinelli_norm(p, X);
  CHECK(b.total == Approx(b.sup_y + b.sup_yp + b.hol_yp + b.hol_R + b.hol2_R).epsilon(1e-15));
  CHECK(gubinelli_norm(p, X, 4).total <= b.total * (1.0 + 1e-15));
}

TEST_CASE("property: gubinelli norm is a norm") {
  gen::for_all(25, 33, [](gen::Rng& r, std::size_t) {
    const RoughPath X = fbm_lift({0.45, 24, 1.0, r.bits()});
    auto p = random_path(r, X, 3);
    auto q = random_path(r, X, 3);
    q.gamma = p.gamma;
    const double s = r.normal();
    ControlledPath sp = p, sum = p;
    for (std::size_t i = 0; i < p.y.size(); ++i) {
      sp.y[i] *= s;
      sp.y_prime[i] *= s;
      sum.y[i] += q.y[i];
      sum.y_prime[i] += q.y_prime[i];
    }
    const double np = gubinelli_norm(p, X).total, nq = gubinelli_norm(q, X).total;
    CHECK(gubinelli_norm(sp, X).total == Approx(std::abs(s) * np).epsilon(1e-12));
    CHECK(gubinelli_norm(sum, X).total <= (np + nq) * (1.0 + 1e-12));
    CHECK(gubinelli_distance(p, q, X) == Approx(gubinelli_distance(q, p, X)).epsilon(1e-14));
    CHECK(gubinelli_distance(p, p, X) == 0.0);
  });
}

TEST_CASE("property: refinement never lowers the sampled seminorms") {
  gen::for_all(10, 41, [](gen::Rng& r, std::size_t) {
    const RoughPath fine = fbm_lift({0.45, 64, 1.0, r.bits()});
    // Coarse path: same data on every second grid point.
    std::vector<double> coarse_x;
    for (std::size_t i = 0; i <= 64; i += 2) coarse_x.push_back(fine.x()[i]);
    const RoughPath coarse = canonical_lift_smooth(coarse_x, fine.grid().coarsened(2), fine.alpha());
    auto pf = random_path(r, fine, 2);
    auto pc = polynomial_path(coarse, pf.y[0], pf.y_prime[0], SpectralField(1, 2), pf.gamma);
    auto pff = polynomial_path(fine, pf.y[0], pf.y_prime[0], SpectralField(1, 2), pf.gamma);
    CHECK(gubinelli_norm(pc, coarse).total <= gubinelli_norm(pff, fine).total * (1.0 + 1e-12));
  });
}

TEST_CASE("holder bound check") {
  gen::Rng r(6);
  const RoughPath X = fbm_lift({0.45, 40, 1.0, 6});
  const SpectralField zero(1, 3);
  const auto v = gen::real_field(r, 1, 3);

  for (const auto& pair : holder_bound_check(polynomial_path(X, v, v, zero, 0.5), X))
    CHECK(pair.lhs <= pair.rhs * (1.0 + 1e-10));

  // y' = 0: only the remainder term is left.
  ControlledPath flat{X.grid(), {}, {}, 0.5, X.alpha()};
  for (std::size_t i = 0; i <= X.steps(); ++i) {
    flat.y.push_back(std::sin(0.3 * i) * v);
    flat.y_prime.push_back(zero);
  }
  for (const auto& pair : holder_bound_check(flat, X))
    CHECK(pair.lhs == Approx(pair.rhs).epsilon(1e-14));

  gen::for_all(30, 9, [](gen::Rng& g, std::size_t) {
    const RoughPath Y = fbm_lift({0.4 + 0.1 * g.uniform(0, 1), 32, 1.0, g.bits()});
    const auto p = random_path(g, Y, 3);
    for (const auto& pair : holder_bound_check(p, Y)) CHECK(pair.lhs <= pair.rhs + 1e-10);
  });
}

TEST_CASE("property: remainder is bilinear in the path data") {
  gen::for_all(20, 15, [](gen::Rng& r, std::size_t) {
    const RoughPath X = fbm_lift({0.45, 16, 1.0, r.bits()});
    const auto p = random_path(r, X, 2), q = random_path(r, X, 2);
    ControlledPath sum = p;
    for (std::size_t i = 0; i < p.y.size(); ++i) {
      sum.y[i] += q.y[i];
      sum.y_prime[i] += q.y_prime[i];
    }
    const std::size_t s = r.index(0, 15), t = r.index(s, 16);
    const auto lhs = remainder(sum, X, s, t);
    const auto rhs = remainder(p, X, s, t) + remainder(q, X, s, t);
    CHECK(norm_gamma(lhs - rhs, 0.0) < 1e-13);
  });
}
