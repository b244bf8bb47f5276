#include "rpde_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rpde/error.hpp"
#include "rpde/expression.hpp"
#include "rpde_cli/scenario.hpp"

namespace rpde::cli {

using nlohmann::json;

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

// json's unsigned conversion silently wraps negatives.
template <class T>
void read_count(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number_integer() || it->get<long long>() < 0)
    throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
  out = it->get<T>();
}

template <class T>
void read_counts(const json& j, const char* key, std::vector<T>& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array()) throw ConfigError(std::string("config key '") + key + "' must be a list");
  out.clear();
  for (const auto& v : *it) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError(std::string("config key '") + key + "' must hold non-negative integers");
    out.push_back(v.get<T>());
  }
}

const std::set<std::string> kPresets = {"linear_g", "torus_example", "custom", "unsafe_quadratic"};

std::string short_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(hurst > 1.0 / 3.0 && hurst <= 0.5, "hurst must lie in (1/3, 1/2], got " + short_number(hurst));
  require(steps >= 2, "steps must be at least 2");
  require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive");
  const double a = effective_alpha();
  require(a > 1.0 / 3.0 && a < 0.5, "alpha must lie in (1/3, 1/2)");
  if (rough_path.empty()) require(a < hurst, "alpha must be below hurst");
  require(dim >= 1 && dim <= 3, "dim must be 1, 2 or 3");
  require(cutoff >= 1 && cutoff <= 256, "cutoff must lie in [1, 256]");
  require(mass >= 0.0, "mass must be non-negative");
  require(kPresets.count(preset) == 1, "unknown preset '" + preset + "'");
  require(std::isfinite(lambda), "lambda must be finite");
  require(preset != "custom" || !drift.empty(), "preset custom needs a drift expression");
  require(residual_factor > 0.0, "residual_factor must be positive");
  require(split >= 0.0 && split < horizon, "split must lie in [0, horizon)");
  require(cocycle_threshold > 0.0, "cocycle_threshold must be positive");
  for (double h : probe_hursts) require(h > probe_alpha && h <= 0.5, "probe_hursts must lie in (probe_alpha, 1/2]");
  require(!probe_hursts.empty(), "probe_hursts must not be empty");
  require(probe_alpha > 1.0 / 3.0 && probe_alpha < 0.5, "probe_alpha must lie in (1/3, 1/2)");
  require(probe_seeds >= 1 && probe_steps >= 4, "probe suite needs a seed and at least 4 steps");
  require(max_window_steps >= 4, "max_window_steps must be at least 4");
  for (unsigned d : depths) require(d <= 12, "depths must not exceed 12");
  require(!refinement_steps.empty(), "refinement_steps must not be empty");
  for (std::size_t i = 0; i < refinement_steps.size(); ++i) {
    require(refinement_steps[i] >= 2, "refinement_steps entries must be at least 2");
    require(refinement_steps.back() % refinement_steps[i] == 0,
            "refinement_steps must divide the finest level");
    if (i > 0) require(refinement_steps[i] > refinement_steps[i - 1], "refinement_steps must increase");
  }
  require(oracle_seeds >= 1, "oracle_seeds must be positive");
  require(oracle_hurst - 0.01 > 1.0 / 3.0 && oracle_hurst <= 0.5, "oracle_hurst out of range");
  require(oracle_tolerance > 0.0, "oracle_tolerance must be positive");
  require(amplitudes.size() >= 3, "amplitudes needs at least 3 values");
  require(affine_r2 > 0.0 && affine_r2 <= 1.0, "affine_r2 must lie in (0, 1]");
  try {
    solver_config(*this, a).validate();
    if (!drift.empty()) Expression{drift};
    Expression{initial};
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const json defaults = config_to_json(ExperimentConfig{});
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!defaults.contains(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");

  ExperimentConfig c;
  read(j, "hurst", c.hurst);
  read_count(j, "steps", c.steps);
  read(j, "horizon", c.horizon);
  read_count(j, "seed", c.seed);
  read_counts(j, "seeds", c.seeds);
  read(j, "alpha", c.alpha);
  read(j, "rough_path", c.rough_path);
  read(j, "gamma", c.gamma);
  read(j, "sigma", c.sigma);
  read(j, "delta", c.delta);
  read_count(j, "depth", c.depth);
  read(j, "picard_tol", c.picard_tol);
  read_count(j, "max_iters", c.max_iters);
  read(j, "contraction_target", c.contraction_target);
  read(j, "blowup_ceiling", c.blowup_ceiling);
  read_count(j, "fixed_windows", c.fixed_windows);
  if (auto it = j.find("bound_constant"); it != j.end() && !it->is_null()) {
    double v = 0.0;
    read(j, "bound_constant", v);
    c.bound_constant = v;
  }
  read(j, "residual_factor", c.residual_factor);
  read_count(j, "dim", c.dim);
  read_count(j, "cutoff", c.cutoff);
  read(j, "mass", c.mass);
  read(j, "preset", c.preset);
  read(j, "lambda", c.lambda);
  read(j, "drift", c.drift);
  read(j, "initial", c.initial);
  read(j, "split", c.split);
  read(j, "cocycle_threshold", c.cocycle_threshold);
  read(j, "probe_hursts", c.probe_hursts);
  read(j, "probe_alpha", c.probe_alpha);
  read_count(j, "probe_seeds", c.probe_seeds);
  read_count(j, "probe_steps", c.probe_steps);
  read_count(j, "max_window_steps", c.max_window_steps);
  read(j, "probe_lambda", c.probe_lambda);
  read(j, "betas", c.betas);
  read_counts(j, "depths", c.depths);
  read_counts(j, "refinement_steps", c.refinement_steps);
  read_count(j, "oracle_seeds", c.oracle_seeds);
  read(j, "oracle_hurst", c.oracle_hurst);
  read(j, "oracle_lambda", c.oracle_lambda);
  read(j, "oracle_tolerance", c.oracle_tolerance);
  read(j, "amplitudes", c.amplitudes);
  read(j, "affine_r2", c.affine_r2);
  read(j, "output", c.output);
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["hurst"] = c.hurst;
  j["steps"] = c.steps;
  j["horizon"] = c.horizon;
  j["seed"] = c.seed;
  j["seeds"] = c.seeds;
  j["alpha"] = c.alpha;
  j["rough_path"] = c.rough_path;
  j["gamma"] = c.gamma;
  j["sigma"] = c.sigma;
  j["delta"] = c.delta;
  j["depth"] = c.depth;
  j["picard_tol"] = c.picard_tol;
  j["max_iters"] = c.max_iters;
  j["contraction_target"] = c.contraction_target;
  j["blowup_ceiling"] = c.blowup_ceiling;
  j["fixed_windows"] = c.fixed_windows;
  j["bound_constant"] = c.bound_constant ? json(*c.bound_constant) : json(nullptr);
  j["residual_factor"] = c.residual_factor;
  j["dim"] = c.dim;
  j["cutoff"] = c.cutoff;
  j["mass"] = c.mass;
  j["preset"] = c.preset;
  j["lambda"] = c.lambda;
  j["drift"] = c.drift;
  j["initial"] = c.initial;
  j["split"] = c.split;
  j["cocycle_threshold"] = c.cocycle_threshold;
  j["probe_hursts"] = c.probe_hursts;
  j["probe_alpha"] = c.probe_alpha;
  j["probe_seeds"] = c.probe_seeds;
  j["probe_steps"] = c.probe_steps;
  j["max_window_steps"] = c.max_window_steps;
  j["probe_lambda"] = c.probe_lambda;
  j["betas"] = c.betas;
  j["depths"] = c.depths;
  j["refinement_steps"] = c.refinement_steps;
  j["oracle_seeds"] = c.oracle_seeds;
  j["oracle_hurst"] = c.oracle_hurst;
  j["oracle_lambda"] = c.oracle_lambda;
  j["oracle_tolerance"] = c.oracle_tolerance;
  j["amplitudes"] = c.amplitudes;
  j["affine_r2"] = c.affine_r2;
  j["output"] = c.output;
  return j;
}

json load_config_json(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  // String fields keep the raw text so `--set drift=0` stays an expression.
  const json defaults = config_to_json(ExperimentConfig{});
  const bool is_text = defaults.contains(key) && defaults.at(key).is_string();
  json v(json::value_t::discarded);
  if (!is_text) v = json::parse(value, nullptr, false);
  if (v.is_discarded()) v = value;
  if (v.is_object()) throw ConfigError("--set only overrides scalar or list fields");
  j[key] = v;
}

}  // namespace rpde::cli
