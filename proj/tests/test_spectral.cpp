#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "rpde/error.hpp"
#include "rpde/spectral.hpp"

using namespace rpde;
using Catch::Approx;

namespace {

SpectralField mode(std::size_t cutoff, int k, Complex a = 1.0) {
  SpectralField u(1, cutoff);
  u.at({k}) = a;
  return u;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("field indexing") {
  SpectralField u(2, 3);
  CHECK(u.size() == 49);
  const int k[] = {-3, 2};
  const auto i = u.index(k);
  CHECK(u.multi_index(i) == std::vector<int>{-3, 2});
  const int bad[] = {4, 0};
  CHECK_THROWS_AS(u.index(bad), InvalidArgument);
  CHECK_THROWS_AS(SpectralField(1, 2, std::vector<Complex>(4)), InvalidArgument);
}

TEST_CASE("norm examples") {
  CHECK(norm_gamma(SpectralField(1, 4), 0.7) == 0.0);
  CHECK(norm_gamma(mode(4, 1), 0.5) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(norm_gamma(mode(4, -2, {0.0, 3.0}), 0.0) == Approx(3.0).epsilon(1e-15));
  SpectralField v(2, 2);
  v.at({1, 1}) = 1.0;
  CHECK(norm_gamma(v, 0.25) == Approx(std::pow(3.0, 0.25)).epsilon(1e-15));
}

TEST_CASE("property: embedding monotonicity in gamma") {
  gen::for_all(200, 21, [](gen::Rng& r, std::size_t) {
    const auto u = gen::field(r, 1 + r.index(0, 1), r.index(0, 6), r.uniform(0.0, 2.0));
    const double a = r.uniform(-1.0, 1.5), b = r.uniform(-1.0, 1.5);
    CHECK(norm_gamma(u, std::min(a, b)) <= norm_gamma(u, std::max(a, b)) * (1.0 + 1e-14));
  });
}

TEST_CASE("interpolation inequality") {
  const auto zero = interpolation_check(SpectralField(1, 3), 0.1, 0.4, 0.8);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  gen::for_all(40, 4, [](gen::Rng& r, std::size_t) {
    const double t = r.uniform(-1.0, 1.0), g = t + r.uniform(0.1, 1.5);
    const double b = r.uniform(t, g);
    const auto p = interpolation_check(mode(5, static_cast<int>(r.index(0, 5)), r.normal()), t, b, g);
    CHECK(std::abs(p.lhs - p.rhs) <= 1e-12 * std::max(1.0, p.rhs));
  });

  gen::for_all(1000, 8, [](gen::Rng& r, std::size_t) {
    const double t = r.uniform(-1.0, 1.0), g = t + r.uniform(0.05, 2.0);
    const double b = r.uniform(t, g);
    const auto u = gen::field(r, 1 + r.index(0, 1), 1 + r.index(0, 5), r.uniform(0.0, 2.0));
    const auto p = interpolation_check(u, t, b, g);
    CHECK(p.lhs <= (1.0 + 1e-10) * p.rhs);
  });
  CHECK_THROWS_AS(interpolation_check(mode(2, 1), 0.5, 0.2, 1.0), InvalidArgument);
}

TEST_CASE("semigroup examples and law") {
  const SpaceScale sc{1, 4, 0.0};
  const auto u = mode(4, 1, 1.0);
  CHECK(semigroup_apply(u, 0.0, sc) == u);
  CHECK(semigroup_apply(u, 1.0, sc).at({1}).real() == Approx(std::exp(-1.0)).epsilon(1e-15));

  const SpaceScale massive{2, 3, 0.7};
  gen::for_all(50, 13, [&](gen::Rng& r, std::size_t) {
    const auto v = gen::field(r, 2, 3);
    const double s = r.uniform(0.0, 1.0), t = r.uniform(0.0, 1.0);
    const auto lhs = semigroup_apply(semigroup_apply(v, s, massive), t, massive);
    const auto rhs = semigroup_apply(v, s + t, massive);
    CHECK(max_diff(lhs, rhs) < 1e-14);
    CHECK(norm_gamma(semigroup_apply(v, t, massive), 0.3) <= norm_gamma(v, 0.3) * (1.0 + 1e-15));
  });
  CHECK_THROWS_AS(semigroup_apply(u, -0.1, sc), InvalidArgument);
  CHECK_THROWS_AS(semigroup_apply(mode(3, 1), 0.1, sc), GridMismatch);
}

TEST_CASE("analytic semigroup bounds") {
  std::vector<double> times;
  for (int i = -40; i <= 10; ++i) times.push_back(std::pow(2.0, 0.25 * i));
  for (double c : {0.0, 0.5, 1.0})
    for (double s : {0.1, 0.39, 0.8}) {
      const auto rep = verify_sg_bounds({1, 16, c}, 0.5, s, times);
      CHECK(rep.restart_constant <= 1.0 + 1e-12);
    }
  for (double c : {0.0, 2.0}) {
    const auto rep = verify_sg_bounds({2, 6, c}, 0.0, 0.0, times);
    CHECK(rep.smoothing_constant <= 1.0 + 1e-15);
  }
  // With c = 1 every mode gives sup_a a^s e^{-a} = (s/e)^s.
  const auto rep = verify_sg_bounds({1, 8, 1.0}, 0.0, 0.4, times);
  CHECK(rep.smoothing_constant == Approx(std::pow(0.4 / std::numbers::e, 0.4)).epsilon(0.05));
}

TEST_CASE("fractional laplacian") {
  const auto u = mode(4, 2, {1.0, -2.0});
  CHECK(frac_laplacian(u, 0.0) == u);
  CHECK(frac_laplacian(u, 0.5).at({2}) == Complex(2.0, -4.0));
  CHECK(frac_laplacian(mode(4, 0), 0.3).at({0}) == Complex(0.0));
  CHECK_THROWS_AS(frac_laplacian(u, -0.1), InvalidArgument);
}

TEST_CASE("dealiased product") {
  gen::Rng r(2);
  const auto u = gen::real_field(r, 1, 6);
  auto one = SpectralField(1, 6);
  one.at({0}) = 1.0;
  CHECK(max_diff(multiply_smooth(u, one), u) < 1e-14);

  const auto sq = multiply_smooth(mode(4, 1), mode(4, 1));
  CHECK(std::abs(sq.at({2}) - 1.0) < 1e-14);
  CHECK(max_diff(sq, mode(4, 2)) < 1e-14);
  CHECK(max_diff(multiply_smooth(mode(1, 1), mode(1, 1)), SpectralField(1, 1)) < 1e-15);

  // cos x * cos x = 1/2 + cos(2x)/2
  SpectralField c(1, 3);
  c.at({1}) = c.at({-1}) = 0.5;
  const auto c2 = multiply_smooth(c, c);
  CHECK(c2.at({0}).real() == Approx(0.5).epsilon(1e-14));
  CHECK(c2.at({2}).real() == Approx(0.25).epsilon(1e-14));

  CHECK_THROWS_AS(multiply_smooth(mode(3, 1), mode(4, 1)), GridMismatch);
}

TEST_CASE("property: product is bilinear, symmetric and preserves reality") {
  gen::for_all(30, 17, [](gen::Rng& r, std::size_t) {
    const std::size_t d = 1 + r.index(0, 1), n = r.index(1, 5);
    const auto a = gen::field(r, d, n), b = gen::field(r, d, n), g = gen::field(r, d, n);
    const double s = r.normal();
    const auto lhs = multiply_smooth(a + s * b, g);
    const auto rhs = multiply_smooth(a, g) + s * multiply_smooth(b, g);
    CHECK(max_diff(lhs, rhs) < 1e-12);
    CHECK(max_diff(multiply_smooth(a, g), multiply_smooth(g, a)) < 1e-13);
    const auto ra = gen::real_field(r, d, n), rg = gen::real_field(r, d, n);
    CHECK(multiply_smooth(ra, rg).reality_defect() < 1e-13);
  });
}

TEST_CASE("collocation roundtrip and sampled functions") {
  gen::for_all(20, 29, [](gen::Rng& r, std::size_t) {
    const std::size_t d = 1 + r.index(0, 1), n = r.index(0, 5);
    const auto u = gen::field(r, d, n);
    const std::size_t m = dealiased_points(n) + r.index(0, 3);
    const auto back = from_collocation(to_collocation(u, m), d, m, n);
    CHECK(max_diff(back, u) < 1e-13);
  });
  const auto f = field_from_function(1, 4, [](std::span<const double> x) {
    return 1.0 + std::sin(x[0]) + 0.5 * std::cos(3.0 * x[0]);
  });
  CHECK(std::abs(f.at({0}) - 1.0) < 1e-14);
  CHECK(std::abs(f.at({1}) - Complex(0.0, -0.5)) < 1e-14);
  CHECK(std::abs(f.at({3}) - 0.25) < 1e-14);
  CHECK(f.reality_defect() < 1e-15);
}

TEST_CASE("pointwise map") {
  SpectralField c(1, 4);
  c.at({1}) = c.at({-1}) = 0.5;
  const auto sq = apply_pointwise(c, [](double v) { return v * v; });
  CHECK(sq.at({0}).real() == Approx(0.5).epsilon(1e-14));
  CHECK(sq.at({2}).real() == Approx(0.25).epsilon(1e-14));
}
