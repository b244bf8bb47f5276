#include "rpde/spectral.hpp"

#include "fftw_lock.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "rpde/error.hpp"

namespace rpde {

// ---------------------------------------------------------------- field

SpectralField::SpectralField(std::size_t dim, std::size_t cutoff)
    : dim_(dim), cutoff_(cutoff) {
  if (dim == 0) throw InvalidArgument("spectral field needs dim >= 1");
  std::size_t n = 1;
  for (std::size_t a = 0; a < dim; ++a) n *= 2 * cutoff + 1;
  coeffs_.assign(n, Complex{});
}

SpectralField::SpectralField(std::size_t dim, std::size_t cutoff, std::vector<Complex> coeffs)
    : SpectralField(dim, cutoff) {
  if (coeffs.size() != coeffs_.size())
    throw InvalidArgument("coefficient count does not match (dim, cutoff)");
  coeffs_ = std::move(coeffs);
}

std::size_t SpectralField::index(std::span<const int> k) const {
  if (k.size() != dim_) throw InvalidArgument("multi-index has wrong dimension");
  const int n = static_cast<int>(cutoff_);
  std::size_t idx = 0;
  for (int kj : k) {
    if (kj < -n || kj > n)
      throw InvalidArgument("mode " + std::to_string(kj) + " beyond cutoff " + std::to_string(n));
    idx = idx * width() + static_cast<std::size_t>(kj + n);
  }
  return idx;
}

Complex& SpectralField::at(std::initializer_list<int> k) {
  return coeffs_[index(std::span<const int>(k.begin(), k.size()))];
}

Complex SpectralField::at(std::initializer_list<int> k) const {
  return coeffs_[index(std::span<const int>(k.begin(), k.size()))];
}

std::vector<int> SpectralField::multi_index(std::size_t i) const {
  std::vector<int> k(dim_);
  for (std::size_t a = dim_; a-- > 0;) {
    k[a] = static_cast<int>(i % width()) - static_cast<int>(cutoff_);
    i /= width();
  }
  return k;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double SpectralField::reality_defect() const {
  // Flat index of -k is the mirror image of the flat index of k.
  double worst = 0.0;
  const std::size_t n = coeffs_.size();
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(coeffs_[n - 1 - i] - std::conj(coeffs_[i])));
  return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!same_shape(o)) throw GridMismatch("field shapes differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (!same_shape(o)) throw GridMismatch("field shapes differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& o) {
  if (!same_shape(o)) throw GridMismatch("field shapes differ");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * o.coeffs_[i];
  return *this;
}

// ---------------------------------------------------------------- norms

std::vector<double> mode_squares(std::size_t dim, std::size_t cutoff) {
  const std::size_t w = 2 * cutoff + 1;
  std::size_t n = 1;
  for (std::size_t a = 0; a < dim; ++a) n *= w;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rest = i;
    double k2 = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
      const double k = static_cast<double>(rest % w) - static_cast<double>(cutoff);
      k2 += k * k;
      rest /= w;
    }
    out[i] = k2;
  }
  return out;
}

std::vector<double> norm_weights(std::size_t dim, std::size_t cutoff, double gamma) {
  auto w = mode_squares(dim, cutoff);
  for (auto& v : w) v = std::pow(1.0 + v, 2.0 * gamma);
  return w;
}

double weighted_norm(std::span<const Complex> coeffs, std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc += weights[i] * std::norm(coeffs[i]);
  return std::sqrt(acc);
}

double norm_gamma(const SpectralField& u, double gamma) {
  const auto w = norm_weights(u.dim(), u.cutoff(), gamma);
  return weighted_norm(u.coeffs(), w);
}

std::vector<double> SpaceScale::decay_rates() const {
  if (mass < 0.0) throw InvalidArgument("mass shift must be non-negative");
  auto r = mode_squares(dim, cutoff);
  for (auto& v : r) v += mass;
  return r;
}

InterpolationPair interpolation_check(const SpectralField& u, double theta, double beta,
                                      double gamma) {
  if (!(theta <= beta && beta <= gamma))
    throw InvalidArgument("interpolation_check needs theta <= beta <= gamma");
  const double nt = norm_gamma(u, theta);
  const double nb = norm_gamma(u, beta);
  const double ng = norm_gamma(u, gamma);
  return {std::pow(nb, gamma - theta), std::pow(nt, gamma - beta) * std::pow(ng, beta - theta)};
}

// ---------------------------------------------------------------- semigroup

std::vector<double> semigroup_factors(const SpaceScale& scale, double t) {
  auto f = scale.decay_rates();
  for (auto& v : f) v = std::exp(-t * v);
  return f;
}

std::vector<double> semigroup_integral_factors(const SpaceScale& scale, double h) {
  auto f = scale.decay_rates();
  for (auto& lam : f) {
    const double a = lam * h;
    // (1 - e^{-a}) / lam, with the a -> 0 limit h.
    lam = a < 1e-8 ? h * (1.0 - 0.5 * a) : -std::expm1(-a) / lam;
  }
  return f;
}

SpectralField semigroup_apply(const SpectralField& u, double t, const SpaceScale& scale) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup_apply needs t >= 0");
  if (!scale.matches(u)) throw GridMismatch("field shape does not match the space scale");
  if (t == 0.0) return u;
  const auto f = semigroup_factors(scale, t);
  SpectralField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= f[i];
  return out;
}

SemigroupBoundReport verify_sg_bounds(const SpaceScale& scale, double /*gamma*/, double sigma,
                                      std::span<const double> times) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw InvalidArgument("sigma must lie in [0, 1]");
  const auto k2 = mode_squares(scale.dim, scale.cutoff);
  const auto lam = scale.decay_rates();
  SemigroupBoundReport rep;
  for (double t : times) {
    if (!(t > 0.0)) throw InvalidArgument("verify_sg_bounds needs t > 0");
    const double ts = std::pow(t, sigma);
    for (std::size_t i = 0; i < k2.size(); ++i) {
      const double bs = std::pow(1.0 + k2[i], sigma);
      const double restart = -std::expm1(-t * lam[i]) / (ts * bs);
      const double smooth = ts * bs * std::exp(-t * lam[i]);
      if (restart > rep.restart_constant) {
        rep.restart_constant = restart;
        rep.restart_argmax_t = t;
      }
      if (smooth > rep.smoothing_constant) {
        rep.smoothing_constant = smooth;
        rep.smoothing_argmax_t = t;
      }
    }
  }
  return rep;
}

SpectralField frac_laplacian(const SpectralField& u, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("fractional power must be non-negative");
  if (sigma == 0.0) return u;
  const auto k2 = mode_squares(u.dim(), u.cutoff());
  SpectralField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= k2[i] == 0.0 ? 0.0 : std::pow(k2[i], sigma);
  return out;
}

// ---------------------------------------------------------------- collocation

std::mutex& detail::fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

// Plans are cached per (dim, points, sign) and executed on caller buffers.
fftw_plan cached_plan(std::size_t dim, std::size_t points, int sign) {
  static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> cache;
  std::lock_guard lock(detail::fftw_planner_mutex());
  const auto key = std::make_tuple(dim, points, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::vector<int> n(dim, static_cast<int>(points));
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) total *= points;
  auto* scratch = fftw_alloc_complex(total);
  fftw_plan plan = fftw_plan_dft(static_cast<int>(dim), n.data(), scratch, scratch, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  cache.emplace(key, plan);
  return plan;
}

void execute(std::vector<Complex>& data, std::size_t dim, std::size_t points, int sign) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cached_plan(dim, points, sign), buf, buf);
}

// Flat collocation index of the wrapped multi-index of field entry i.
std::size_t wrapped_index(const SpectralField& u, std::size_t i, std::size_t points) {
  const std::size_t w = u.width();
  const long long n = static_cast<long long>(u.cutoff());
  std::size_t out = 0;
  std::size_t stride = 1;
  for (std::size_t a = 0; a < u.dim(); ++a) {
    const long long k = static_cast<long long>(i % w) - n;
    i /= w;
    const long long p = static_cast<long long>(points);
    out += static_cast<std::size_t>(((k % p) + p) % p) * stride;
    stride *= points;
  }
  return out;
}

std::size_t grid_total(std::size_t dim, std::size_t points) {
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) total *= points;
  return total;
}

}  // namespace

// Collocation values are row-major with axis 0 slowest, like the coefficients.
std::vector<Complex> to_collocation(const SpectralField& u, std::size_t points) {
  if (points < u.width()) throw InvalidArgument("collocation grid too coarse for the cutoff");
  std::vector<Complex> vals(grid_total(u.dim(), points), Complex{});
  for (std::size_t i = 0; i < u.size(); ++i) vals[wrapped_index(u, i, points)] = u[i];
  execute(vals, u.dim(), points, FFTW_BACKWARD);
  return vals;
}

SpectralField from_collocation(std::span<const Complex> values, std::size_t dim,
                               std::size_t points, std::size_t cutoff) {
  if (points < 2 * cutoff + 1) throw InvalidArgument("collocation grid too coarse for the cutoff");
  if (values.size() != grid_total(dim, points))
    throw InvalidArgument("collocation value count does not match the grid");
  std::vector<Complex> buf(values.begin(), values.end());
  execute(buf, dim, points, FFTW_FORWARD);
  const double norm = 1.0 / static_cast<double>(buf.size());
  SpectralField out(dim, cutoff);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[wrapped_index(out, i, points)] * norm;
  return out;
}

SpectralField multiply_smooth(const SpectralField& u, const SpectralField& g) {
  if (!u.same_shape(g)) throw GridMismatch("multiply_smooth: fields differ in (dim, cutoff)");
  const std::size_t m = dealiased_points(u.cutoff());
  auto a = to_collocation(u, m);
  const auto b = to_collocation(g, m);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return from_collocation(a, u.dim(), m, u.cutoff());
}

SpectralField apply_pointwise(const SpectralField& u, const std::function<double(double)>& f) {
  const std::size_t m = dealiased_points(u.cutoff());
  auto vals = to_collocation(u, m);
  for (auto& v : vals) v = Complex(f(v.real()), 0.0);
  return from_collocation(vals, u.dim(), m, u.cutoff());
}

SpectralField field_from_function(std::size_t dim, std::size_t cutoff,
                                  const std::function<double(std::span<const double>)>& f) {
  const std::size_t m = dealiased_points(cutoff);
  const std::size_t total = grid_total(dim, m);
  std::vector<Complex> vals(total);
  std::vector<double> x(dim);
  for (std::size_t j = 0; j < total; ++j) {
    std::size_t rest = j;
    for (std::size_t a = 0; a < dim; ++a) {
      x[dim - 1 - a] = 2.0 * std::numbers::pi * static_cast<double>(rest % m) / static_cast<double>(m);
      rest /= m;
    }
    vals[j] = Complex(f(x), 0.0);
  }
  return from_collocation(vals, dim, m, cutoff);
}

}  // namespace rpde
