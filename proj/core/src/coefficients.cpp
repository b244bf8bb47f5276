#include "rpde/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "rpde/error.hpp"

namespace rpde {

SpectralField Coefficients::F(const SpectralField& y) const {
  return drift ? drift(y) : SpectralField::zeros_like(y);
}

SpectralField Coefficients::G(const SpectralField& y) const {
  return diffusion ? diffusion(y) : SpectralField::zeros_like(y);
}

SpectralField Coefficients::DG(const SpectralField& y, const SpectralField& v) const {
  if (!diffusion) return SpectralField::zeros_like(y);
  if (diffusion_derivative) return diffusion_derivative(y, v);
  if (linear_diffusion) return diffusion(v);
  return finite_difference_derivative(diffusion)(y, v);
}

SpectralField Coefficients::DGG(const SpectralField& y) const {
  if (!diffusion) return SpectralField::zeros_like(y);
  if (diffusion_composite) return diffusion_composite(y);
  return DG(y, G(y));
}

Coefficients zero_coefficients() {
  Coefficients c;
  c.name = "zero";
  return c;
}

namespace {

// A multiplier with only a real zero mode acts as a scalar.
bool is_real_constant(const SpectralField& g) {
  const std::size_t centre = g.size() / 2;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (i != centre && g[i] != Complex{}) return false;
  return g[centre].imag() == 0.0;
}

}  // namespace

Coefficients with_linear_diffusion(Coefficients base, SpectralField multiplier, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("diffusion loss sigma must be non-negative");
  const bool constant = is_real_constant(multiplier);
  const double scalar = multiplier[multiplier.size() / 2].real();
  auto apply = [g = std::move(multiplier), sigma, constant, scalar](const SpectralField& y) {
    if (g.dim() != y.dim() || g.cutoff() != y.cutoff())
      throw GridMismatch("diffusion multiplier shape differs from the state");
    SpectralField ly = frac_laplacian(y, sigma);
    if (constant) return ly *= scalar;
    return multiply_smooth(ly, g);
  };
  base.diffusion = apply;
  base.diffusion_derivative = [apply](const SpectralField&, const SpectralField& v) {
    return apply(v);
  };
  base.diffusion_composite = [apply](const SpectralField& y) { return apply(apply(y)); };
  base.diffusion_loss = sigma;
  base.linear_diffusion = true;
  return base;
}

Coefficients scalar_linear_diffusion(double lambda) {
  Coefficients c;
  c.diffusion = [lambda](const SpectralField& y) { return lambda * y; };
  c.diffusion_derivative = [lambda](const SpectralField&, const SpectralField& v) {
    return lambda * v;
  };
  c.diffusion_composite = [lambda](const SpectralField& y) { return (lambda * lambda) * y; };
  c.diffusion_loss = 0.0;
  c.linear_diffusion = true;
  c.name = "linear_g";
  return c;
}

Coefficients with_pointwise_drift(Coefficients base, std::function<double(double)> f) {
  base.drift = [f = std::move(f)](const SpectralField& y) { return apply_pointwise(y, f); };
  base.drift_loss = 0.0;
  return base;
}

Coefficients with_linear_drift(Coefficients base, double a) {
  base.drift = [a](const SpectralField& y) { return a * y; };
  base.drift_loss = 0.0;
  return base;
}

FieldDerivative finite_difference_derivative(FieldMap g, double rel_step) {
  return [g = std::move(g), rel_step](const SpectralField& y, const SpectralField& v) {
    const double vn = norm_gamma(v, 0.0);
    if (vn == 0.0) return SpectralField::zeros_like(y);
    const double h = rel_step * std::max(1.0, norm_gamma(y, 0.0)) / vn;
    SpectralField plus = y;
    plus.axpy(h, v);
    SpectralField minus = y;
    minus.axpy(-h, v);
    SpectralField d = g(plus);
    d -= g(minus);
    return d *= 0.5 / h;
  };
}

CoefficientProbe probe_coefficients(const Coefficients& c, std::span<const SpectralField> probes,
                                    double gamma, double alpha) {
  CoefficientProbe out;
  const double sigma = c.diffusion_loss;
  for (const auto& u : probes) {
    const double growth = norm_gamma(c.F(u), gamma - c.drift_loss) / (1.0 + norm_gamma(u, gamma));
    out.drift_growth = std::max(out.drift_growth, growth);
    for (const auto& v : probes) {
      const double vn = norm_gamma(v, gamma);
      if (vn > 0.0)
        out.derivative_bound =
            std::max(out.derivative_bound, norm_gamma(c.DG(u, v), gamma - sigma) / vn);
      const double dn = norm_gamma(u - v, gamma - alpha);
      if (dn > 0.0) {
        const SpectralField gu = c.G(u);
        SpectralField diff = c.DG(u, gu);
        diff -= c.DG(v, gu);
        out.composite_lipschitz = std::max(
            out.composite_lipschitz, norm_gamma(diff, gamma - 2.0 * alpha - sigma) / dn);
      }
    }
  }
  return out;
}

}  // namespace rpde
