#pragma once

// Small hand-rolled generators for the property tests. Every property runs a
// fixed number of cases from a fixed seed, so failures replay exactly.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rpde/rough_path.hpp"
#include "rpde/spectral.hpp"

namespace gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  double normal() { return std::normal_distribution<double>()(eng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

/// Random complex field with algebraic decay (1+|k|^2)^{-decay}.
inline rpde::SpectralField field(Rng& r, std::size_t dim, std::size_t cutoff, double decay = 1.0) {
  rpde::SpectralField u(dim, cutoff);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double k2 = 0.0;
    for (int k : u.multi_index(i)) k2 += k * k;
    u[i] = rpde::Complex(r.normal(), r.normal()) * std::pow(1.0 + k2, -decay);
  }
  return u;
}

/// Real field: coefficient of -k is the conjugate of k.
inline rpde::SpectralField real_field(Rng& r, std::size_t dim, std::size_t cutoff, double decay = 1.0) {
  rpde::SpectralField u = field(r, dim, cutoff, decay);
  rpde::SpectralField v = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto k = u.multi_index(i);
    for (auto& c : k) c = -c;
    v[i] = 0.5 * (u[i] + std::conj(u[u.index(k)]));
  }
  return v;
}

/// Increasing grid on [0, T] with n steps and random spacing.
inline rpde::TimeGrid grid(Rng& r, std::size_t n, double T = 1.0) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = r.uniform(0.2, 1.0));
  std::vector<double> t{0.0};
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) t.push_back(T * (acc += w[i]) / total);
  t.push_back(T);
  return rpde::TimeGrid(std::move(t));
}

/// Random trigonometric path with f(0) = 0.
inline std::function<double(double)> smooth_path(Rng& r) {
  const double a = r.normal(), b = r.normal(), w1 = r.uniform(1.0, 8.0), w2 = r.uniform(1.0, 8.0);
  return [=](double t) { return a * std::sin(w1 * t) + b * (1.0 - std::cos(w2 * t)); };
}

/// Runs `prop(rng, case_index)` for `cases` cases.
inline void for_all(std::size_t cases, std::uint64_t seed, const std::function<void(Rng&, std::size_t)>& prop) {
  Rng r(seed);
  for (std::size_t i = 0; i < cases; ++i) prop(r, i);
}

}  // namespace gen
