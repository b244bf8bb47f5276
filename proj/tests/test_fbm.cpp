#include <catch_amalgamated.hpp>

#include <cmath>

#include "rpde/error.hpp"
#include "rpde/rough_path.hpp"

using namespace rpde;

TEST_CASE("fbm lift is seeded and deterministic") {
  const FbmParams p{0.4, 128, 1.0, 42};
  const RoughPath a = fbm_lift(p), b = fbm_lift(p);
  CHECK(std::equal(a.x().begin(), a.x().end(), b.x().begin()));
  CHECK(std::equal(a.x2_step().begin(), a.x2_step().end(), b.x2_step().begin()));
  CHECK(a.alpha() == 0.4 - 0.01);
  CHECK(a.provenance().find(kFbmGeneratorVersion) != std::string::npos);

  const RoughPath c = fbm_lift({0.4, 128, 1.0, 43});
  CHECK_FALSE(std::equal(a.x().begin(), a.x().end(), c.x().begin()));
}

TEST_CASE("fbm lift rejects out-of-range parameters") {
  CHECK_THROWS_AS(fbm_lift({0.25, 16, 1.0, 1}), InvalidArgument);
  CHECK_THROWS_AS(fbm_lift({0.6, 16, 1.0, 1}), InvalidArgument);
  CHECK_THROWS_AS(fbm_lift({0.45, 0, 1.0, 1}), InvalidArgument);
  CHECK_THROWS_AS(fbm_lift({0.45, 16, 1.0, 1, 0.45}), InvalidArgument);
}

TEST_CASE("fbm lift is geometric and Chen-exact") {
  for (double H : {0.35, 0.45, 0.5}) {
    const RoughPath X = fbm_lift({H, 256, 2.0, 5});
    CHECK(chen_defect(materialize_x2_table(X), X.x()) < 1e-12);
    for (std::size_t i = 0; i < X.steps(); ++i) CHECK(std::abs(X.bracket(i)) < 1e-15);
  }
}

// Monte-Carlo oracles: Brownian variance at T = 1 and quadratic variation.
TEST_CASE("fbm with H = 1/2 reproduces Brownian statistics") {
  const std::size_t seeds = 10000;
  double sum = 0.0, sum2 = 0.0, qv = 0.0, qv2 = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto x = sample_fbm({0.5, 64, 1.0, s});
    const double v = x.back() * x.back();
    sum += v;
    sum2 += v * v;
    if (s < 1000) {
      double q = 0.0;
      for (std::size_t i = 1; i < x.size(); ++i) q += (x[i] - x[i - 1]) * (x[i] - x[i - 1]);
      qv += q;
      qv2 += q * q;
    }
  }
  const double mean = sum / seeds;
  const double se = std::sqrt((sum2 / seeds - mean * mean) / seeds);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);

  const double qmean = qv / 1000.0;
  const double qse = std::sqrt((qv2 / 1000.0 - qmean * qmean) / 1000.0);
  CHECK(std::abs(qmean - 1.0) < 3.0 * qse);
}

TEST_CASE("fbm increments follow the fractional covariance") {
  // E[B_s B_t] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2 at two fixed times.
  const double H = 0.4;
  const std::size_t seeds = 4000;
  double c = 0.0, c2 = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto x = sample_fbm({H, 16, 2.0, 1000 + s});
    const double v = x[4] * x[16];  // t = 0.5 and t = 2
    c += v;
    c2 += v * v;
  }
  const double mean = c / seeds;
  const double se = std::sqrt((c2 / seeds - mean * mean) / seeds);
  const double exact = 0.5 * (std::pow(0.5, 2 * H) + std::pow(2.0, 2 * H) - std::pow(1.5, 2 * H));
  CHECK(std::abs(mean - exact) < 3.5 * se);
}
