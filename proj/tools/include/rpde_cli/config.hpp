#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rpde::cli {

/// Invalid or unknown configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (exit code 1).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run depends on. Unknown JSON keys are rejected.
struct ExperimentConfig {
  // noise
  double hurst = 0.45;
  std::size_t steps = 256;
  double horizon = 1.0;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;  ///< non-empty: one run per seed
  double alpha = -1.0;               ///< negative: hurst - 0.01
  std::string rough_path;            ///< load this lift instead of sampling

  // solver
  double gamma = 0.5;
  double sigma = 0.0;
  double delta = 0.0;
  unsigned depth = 0;
  double picard_tol = 1e-8;
  std::size_t max_iters = 50;
  double contraction_target = 0.5;
  double blowup_ceiling = 1e12;
  std::size_t fixed_windows = 0;
  std::optional<double> bound_constant;
  double residual_factor = 10.0;

  // space
  std::size_t dim = 1;
  std::size_t cutoff = 8;
  double mass = 0.0;

  // coefficients
  std::string preset = "torus_example";  ///< linear_g | torus_example | custom | unsafe_quadratic
  double lambda = 0.5;
  std::string drift;  ///< f(u); empty selects the preset default
  std::string initial = "sin(u) + 0.5*cos(2*u)";

  // cocycle
  double split = 0.5;
  double cocycle_threshold = 1e-6;

  // converge
  std::vector<double> probe_hursts = {0.45, 0.5};
  double probe_alpha = 0.4;
  std::size_t probe_seeds = 8;
  std::size_t probe_steps = 256;
  std::size_t max_window_steps = 64;
  double probe_lambda = 1.0;
  std::vector<double> betas;  ///< empty: {0, alpha, 2 alpha}
  std::vector<unsigned> depths = {0, 1, 2, 3, 4, 5, 6};
  std::vector<std::size_t> refinement_steps = {64, 128, 256, 512};
  std::size_t oracle_seeds = 8;
  double oracle_hurst = 0.45;
  double oracle_lambda = 0.5;
  double oracle_tolerance = 1e-3;
  std::vector<double> amplitudes = {1, 2, 4, 8};
  double affine_r2 = 0.999;

  std::string output;  ///< relative to $RPDE_OUT_ROOT (or the working directory)

  double effective_alpha() const { return alpha < 0.0 ? hurst - 0.01 : alpha; }
  std::vector<std::uint64_t> run_seeds() const {
    return seeds.empty() ? std::vector<std::uint64_t>{seed} : seeds;
  }
  std::vector<double> effective_betas() const {
    return betas.empty() ? std::vector<double>{0.0, probe_alpha, 2.0 * probe_alpha} : betas;
  }

  /// Range checks mirroring SolverConfig plus the noise and preset fields.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// Reads a JSON object from `path` (empty path gives {}).
nlohmann::json load_config_json(const std::string& path);

/// Applies `key=value`; the value is parsed as JSON and falls back to a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace rpde::cli
