#pragma once

#include <functional>
#include <string>

#include "rpde/spectral.hpp"

namespace rpde {

using FieldMap = std::function<SpectralField(const SpectralField&)>;
/// (y, v) -> DG(y)[v]
using FieldDerivative = std::function<SpectralField(const SpectralField&, const SpectralField&)>;

/// Drift F and diffusion G of the equation, with the derivative actions
/// the controlled calculus needs.
struct Coefficients {
  FieldMap drift;             ///< F; empty means F = 0
  double drift_loss = 0.0;    ///< delta in [0, 1)
  FieldMap diffusion;         ///< G; empty means G = 0
  FieldDerivative diffusion_derivative;  ///< DG(y)[v]
  FieldMap diffusion_composite;          ///< DG(y) G(y); derived from the above when empty
  double diffusion_loss = 0.0;           ///< sigma in [0, alpha)
  bool linear_diffusion = false;
  std::string name = "custom";

  bool has_drift() const { return static_cast<bool>(drift); }
  bool has_diffusion() const { return static_cast<bool>(diffusion); }

  SpectralField F(const SpectralField& y) const;
  SpectralField G(const SpectralField& y) const;
  SpectralField DG(const SpectralField& y, const SpectralField& v) const;
  SpectralField DGG(const SpectralField& y) const;
};

/// Zero drift and zero diffusion.
Coefficients zero_coefficients();

/// G(y) = g (-Laplacian)^sigma y with a smooth real multiplier g.
/// DG(y)[v] = G(v) and DG(y)G(y) = G(G(y)) in closed form.
Coefficients with_linear_diffusion(Coefficients base, SpectralField multiplier, double sigma);

/// G(y) = lambda y (g = lambda, sigma = 0).
Coefficients scalar_linear_diffusion(double lambda);

/// F(y) = f(y(x)) pointwise with f Lipschitz of linear growth (delta = 0).
Coefficients with_pointwise_drift(Coefficients base, std::function<double(double)> f);

/// F(y) = a * y.
Coefficients with_linear_drift(Coefficients base, double a);

/// Central finite-difference DG(y)[v] with relative step `rel_step`,
/// for user-supplied nonlinear G without a closed-form derivative.
FieldDerivative finite_difference_derivative(FieldMap g, double rel_step = 1e-5);

/// Empirical constants of the coefficient assumptions on probe fields.
struct CoefficientProbe {
  double drift_growth = 0.0;        ///< max |F(u)|_{g-delta} / (1 + |u|_g)
  double derivative_bound = 0.0;    ///< max |DG(u)v|_{g-sigma} / |v|_g
  double composite_lipschitz = 0.0; ///< max |(DG(u1)-DG(u2))G(u1)|_{g-2a-s} / |u1-u2|_{g-a}
};
CoefficientProbe probe_coefficients(const Coefficients& c, std::span<const SpectralField> probes,
                                    double gamma, double alpha);

}  // namespace rpde
