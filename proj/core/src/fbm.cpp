#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <sstream>

#include "fftw_lock.hpp"
#include "rpde/error.hpp"
#include "rpde/rough_path.hpp"

namespace rpde {
namespace {

void dft_forward(std::vector<std::complex<double>>& data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(detail::fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  if (k == 0) return 1.0;
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
}

}  // namespace

std::vector<double> sample_fbm(const FbmParams& params) {
  const double H = params.hurst;
  const std::size_t n = params.steps;
  if (!(H > 1.0 / 3.0 && H <= 0.5))
    throw InvalidArgument("Hurst index must lie in (1/3, 1/2], got " + std::to_string(H));
  if (n == 0) throw InvalidArgument("fbm_lift needs n >= 1");
  if (!(params.horizon > 0.0) || !std::isfinite(params.horizon))
    throw InvalidArgument("fbm_lift needs a positive finite horizon");

  // Circulant embedding of the n x n fGn covariance in size 2n.
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> eig(m);
  for (std::size_t j = 0; j <= n; ++j) eig[j] = fgn_autocovariance(H, j);
  for (std::size_t j = 1; j < n; ++j) eig[m - j] = eig[j];
  dft_forward(eig);

  double max_ev = 0.0;
  double min_ev = 0.0;
  for (const auto& e : eig) {
    max_ev = std::max(max_ev, e.real());
    min_ev = std::min(min_ev, e.real());
  }
  if (min_ev < -1e-12 * std::max(1.0, max_ev)) throw CovarianceFactorizationError(H, n, min_ev);

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    const double scale = std::sqrt(std::max(eig[k].real(), 0.0) / static_cast<double>(m));
    w[k] = scale * std::complex<double>(re, im);
  }
  // Real part of F diag(sqrt(lambda/m)) xi has covariance exactly C.
  dft_forward(w);

  const double step_scale = std::pow(params.horizon / static_cast<double>(n), H);
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) b[i + 1] = b[i] + step_scale * w[i].real();
  return b;
}

RoughPath fbm_lift(const FbmParams& params) {
  const double alpha = params.alpha < 0.0 ? params.hurst - 0.01 : params.alpha;
  if (!(alpha < params.hurst))
    throw InvalidArgument("lift exponent alpha must be below the Hurst index");
  auto samples = sample_fbm(params);
  auto grid = TimeGrid::uniform(params.horizon, params.steps);
  RoughPath X = canonical_lift_smooth(samples, grid, alpha);
  std::ostringstream os;
  os.precision(17);
  os << "fbm H=" << params.hurst << " n=" << params.steps << " T=" << params.horizon
     << " seed=" << params.seed << " generator=" << kFbmGeneratorVersion;
  X.set_provenance(os.str());
  return X;
}

}  // namespace rpde
