#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rpde {

/// Input violates a documented precondition (range, ordering, shape).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two objects that must share a time grid (or a spectral shape) do not.
class GridMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Circulant embedding of the fBm covariance produced a negative eigenvalue.
class CovarianceFactorizationError : public std::runtime_error {
 public:
  CovarianceFactorizationError(double hurst, std::size_t steps, double min_eigenvalue);
  double hurst;
  std::size_t steps;
  double min_eigenvalue;
};

/// Dyadic refinement of a compensated sum did not settle within tolerance.
class NonCauchyError : public std::runtime_error {
 public:
  NonCauchyError(double window_start, double window_end, double last_difference);
  double window_start;
  double window_end;
  double last_difference;
};

/// Picard iteration exhausted its budget without meeting the tolerance.
class NonContractionError : public std::runtime_error {
 public:
  NonContractionError(double window_start, double window_end, double previous_distance,
                      double last_distance);
  double window_start;
  double window_end;
  double previous_distance;
  double last_distance;
};

/// Non-finite values or a norm beyond the configured ceiling.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, double norm, const std::string& what);
  double time;
  double norm;
  /// |y_t|_gamma for every grid point solved before the abort (filled by global_solve).
  std::vector<double> history;
};

}  // namespace rpde
