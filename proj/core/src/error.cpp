#include "rpde/error.hpp"

#include <sstream>

namespace rpde {
namespace {

std::string describe(auto&&... parts) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << parts);
  return os.str();
}

}  // namespace

CovarianceFactorizationError::CovarianceFactorizationError(double h, std::size_t n, double ev)
    : std::runtime_error(describe("fBm covariance factorization failed for H=", h, ", n=", n,
                                  ": circulant eigenvalue ", ev, " < 0")),
      hurst(h),
      steps(n),
      min_eigenvalue(ev) {}

NonCauchyError::NonCauchyError(double a, double b, double diff)
    : std::runtime_error(describe("compensated sums on window [", a, ", ", b,
                                  "] not Cauchy under refinement; last difference ", diff)),
      window_start(a),
      window_end(b),
      last_difference(diff) {}

NonContractionError::NonContractionError(double a, double b, double prev, double last)
    : std::runtime_error(describe("Picard iteration on window [", a, ", ", b,
                                  "] did not converge; last distances ", prev, ", ", last,
                                  " (window too long?)")),
      window_start(a),
      window_end(b),
      previous_distance(prev),
      last_distance(last) {}

BlowUpError::BlowUpError(double t, double n, const std::string& what)
    : std::runtime_error(describe("blow-up at t=", t, ": ", what, " (|y_t|=", n, ")")),
      time(t),
      norm(n) {}

}  // namespace rpde
