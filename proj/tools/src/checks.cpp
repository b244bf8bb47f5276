#include "rpde_cli/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "rpde/error.hpp"
#include "rpde/solver.hpp"
#include "rpde_cli/commands.hpp"
#include "rpde_cli/config.hpp"
#include "rpde_cli/scenario.hpp"

namespace rpde::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

CheckResult finish(int id, const char* name, double budget, bool ok, const std::string& detail,
                   const Stopwatch& sw) {
  CheckResult r;
  r.id = id;
  r.name = name;
  r.seconds = sw.seconds();
  r.budget_seconds = budget;
  r.passed = ok && r.seconds < budget;
  r.detail = detail;
  if (ok && !r.passed) r.detail += " (over time budget)";
  return r;
}

// Scenario shared by the globalization and cocycle criteria.
ExperimentConfig torus_scenario() {
  ExperimentConfig c;
  c.preset = "torus_example";
  c.lambda = 0.5;
  c.sigma = 0.1;
  c.cutoff = 8;
  c.hurst = 0.45;
  c.seed = 11;
  return c;
}

double max_trajectory_gap(const SolutionRecord& a, const SolutionRecord& b, double gamma) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.trajectory.y.size(); ++i)
    d = std::max(d, norm_gamma(a.trajectory.y[i] - b.trajectory.y[i], gamma));
  return d;
}

}  // namespace

// 1 -------------------------------------------------------------------------

CheckResult check_chen(unsigned jobs) {
  Stopwatch sw;
  const double hursts[] = {0.35, 0.4, 0.5};
  std::vector<double> defects(100);
  parallel_for(defects.size(), jobs, [&](std::size_t i) {
    const RoughPath X = fbm_lift({hursts[i % 3], 512, 1.0, 1000 + i});
    defects[i] = chen_defect(materialize_x2_table(X), X.x());
  });
  const double fbm_worst = *std::max_element(defects.begin(), defects.end());

  std::vector<double> t_uneven{0.0};
  for (std::size_t i = 1; i <= 200; ++i) t_uneven.push_back(std::pow(i / 200.0, 1.7));
  const TimeGrid grids[] = {TimeGrid::uniform(1.0, 256), TimeGrid(t_uneven)};
  const std::function<double(double)> smooth[] = {
      [](double t) { return std::sin(2.0 * std::numbers::pi * t); },
      [](double t) { return t * t * t - t; },
      [](double t) { return std::exp(t) * std::cos(3.0 * t); },
  };
  double smooth_worst = 0.0;
  for (const auto& g : grids)
    for (const auto& f : smooth) {
      const RoughPath X = canonical_lift_smooth(f, g, 0.4);
      smooth_worst = std::max(smooth_worst, chen_defect(materialize_x2_table(X), X.x()));
    }
  const bool ok = fbm_worst < 1e-12 && smooth_worst < 1e-12;
  return finish(1, "chen-relation", 10.0, ok,
                "max defect " + num(fbm_worst) + " over 100 fBm lifts (n=512), " +
                    num(smooth_worst) + " over 6 smooth lifts; limit 1e-12",
                sw);
}

// 2 -------------------------------------------------------------------------

CheckResult check_interpolation() {
  Stopwatch sw;
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(-1.0, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(trial % 2);
    const std::size_t cutoff = 1 + static_cast<std::size_t>(rng() % (dim == 1 ? 24 : 8));
    const double decay = 0.5 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    SpectralField u(dim, cutoff);
    for (std::size_t i = 0; i < u.size(); ++i) {
      double k2 = 0.0;
      for (int k : u.multi_index(i)) k2 += k * k;
      u[i] = Complex(normal(rng), normal(rng)) * std::pow(1.0 + k2, -decay);
    }
    double p[3] = {unif(rng), unif(rng), unif(rng)};
    std::sort(p, p + 3);
    if (p[2] - p[0] < 1e-3) continue;
    const auto r = interpolation_check(u, p[0], p[1], p[2]);
    worst = std::max(worst, r.lhs / r.rhs);
  }
  double single = 0.0;
  for (int k = 0; k <= 12; ++k) {
    SpectralField u(1, 12);
    u.at({k}) = Complex(0.3 + k, -1.0);
    for (double t : {-0.5, 0.0, 0.25})
      for (double g : {0.5, 1.0, 1.75}) {
        const auto r = interpolation_check(u, t, 0.5 * (t + g), g);
        single = std::max(single, std::abs(r.lhs / r.rhs - 1.0));
      }
  }
  const bool ok = worst <= 1.0 + 1e-10 && single <= 1e-12;
  return finish(2, "interpolation-inequality", 5.0, ok,
                "max lhs/rhs " + num(worst) + " on 1000 random fields; single-mode |ratio-1| " +
                    num(single),
                sw);
}

// 3 -------------------------------------------------------------------------

CheckResult check_semigroup() {
  Stopwatch sw;
  auto times = [](std::size_t m) {
    std::vector<double> t(m);
    for (std::size_t i = 0; i < m; ++i)
      t[i] = std::pow(10.0, -6.0 + 6.0 * static_cast<double>(i) / static_cast<double>(m - 1));
    return t;
  };
  const auto coarse = times(200), fine = times(399);
  double restart = 0.0, drift = 0.0;
  for (double sigma : {0.0, 0.25, 0.5, 1.0})
    for (double mass : {0.0, 0.5, 1.0})
      for (const SpaceScale& s : {SpaceScale{1, 64, mass}, SpaceScale{2, 12, mass}}) {
        const auto a = verify_sg_bounds(s, 0.5, sigma, coarse);
        const auto b = verify_sg_bounds(s, 0.5, sigma, fine);
        restart = std::max({restart, a.restart_constant, b.restart_constant});
        drift = std::max(drift, std::abs(b.smoothing_constant - a.smoothing_constant) /
                                    a.smoothing_constant);
      }
  const bool ok = restart <= 1.0 + 1e-10 && drift < 0.05;
  return finish(3, "semigroup-bounds", 5.0, ok,
                "restart constant " + num(restart) + " (limit 1+1e-10); smoothing constant moves " +
                    num(100.0 * drift) + "% under t-grid refinement (limit 5%)",
                sw);
}

// 4 -------------------------------------------------------------------------

CheckResult check_sewing(unsigned jobs) {
  Stopwatch sw;
  ExperimentConfig c;
  c.cutoff = 4;
  const auto rows = sewing_suite(c, jobs);
  double margin = std::numeric_limits<double>::infinity();
  std::string worst;
  for (const auto& r : rows) {
    const double m = r.probe.fitted_rate - r.probe.floor;
    if (m < margin) {
      margin = m;
      worst = "depth " + std::to_string(r.depth) + " beta " + num(r.probe.beta) + ": rate " +
              num(r.probe.fitted_rate) + " vs floor " + num(r.probe.floor);
    }
  }
  return finish(4, "sewing-rates", 120.0, margin >= 0.0,
                std::to_string(rows.size()) + " probes, tightest " + worst, sw);
}

// 5 -------------------------------------------------------------------------

CheckResult check_oracles(unsigned jobs) {
  Stopwatch sw;
  std::ostringstream detail;
  bool ok = true;

  // (a) telescoping: int_0^1 X dX with X_t = t and S = Id.
  {
    const RoughPath X = canonical_lift_smooth([](double t) { return t; }, TimeGrid::uniform(1.0, 256), 0.4);
    const SpaceScale id{1, 0, 0.0};
    ControlledPath p;
    p.grid = X.grid();
    p.alpha = 0.4;
    for (std::size_t i = 0; i < X.grid().size(); ++i) {
      p.y.emplace_back(1, 0, std::vector<Complex>{X.x()[i]});
      p.y_prime.emplace_back(1, 0, std::vector<Complex>{1.0});
    }
    bool exact = true;
    for (unsigned d = 0; d <= 6; ++d)
      exact = exact && rough_integral(p, X, id, 0, X.steps(), d)[0] == Complex(0.5, 0.0);
    ok = ok && exact;
    detail << "(a) " << (exact ? "exactly 1/2" : "NOT exactly 1/2") << " at depths 0-6; ";
  }
  // (b) drift: constant forcing on the mode |k|^2 = 1, no mass.
  {
    const SpaceScale s{1, 1, 0.0};
    SpectralField e(1, 1);
    e.at({1}) = 1.0;
    e.at({-1}) = 1.0;
    Coefficients co;
    co.drift = [e](const SpectralField&) { return e; };
    const TimeGrid g = TimeGrid::uniform(1.0, 16);
    std::vector<SpectralField> y(g.size(), SpectralField(1, 1));
    const double got = drift_convolution(y, g, co, s, g.steps()).at({1}).real();
    const double err = std::abs(got - (1.0 - std::exp(-1.0)));
    ok = ok && err < 1e-10;
    detail << "(b) |error| " << num(err) << "; ";
  }
  // (c) geometric linear-G oracle, first on a smooth lift, then on nested fBm grids.
  {
    ExperimentConfig c;
    const SpaceScale scale = space_scale(c);
    const SpectralField y0 = initial_field(c);
    double prev = std::numeric_limits<double>::infinity();
    bool smooth_ok = true;
    for (std::size_t n : {64, 128, 256, 512}) {
      const RoughPath X = canonical_lift_smooth(
          [](double t) { return std::sin(2.0 * std::numbers::pi * t); },
          TimeGrid::uniform(1.0, n), 0.44);
      SolverConfig cfg = solver_config(c, 0.44);
      cfg.depth = 5;
      const auto rec = global_solve(y0, scalar_linear_diffusion(c.oracle_lambda), X, cfg);
      const auto exact = geometric_solution(y0, X, scale, c.oracle_lambda, c.gamma);
      double err = 0.0;
      for (std::size_t i = 0; i < exact.y.size(); ++i)
        err = std::max(err, norm_gamma(rec.trajectory.y[i] - exact.y[i], c.gamma) /
                                norm_gamma(exact.y[i], c.gamma));
      smooth_ok = smooth_ok && err < prev;
      prev = err;
    }
    ok = ok && smooth_ok && prev < 1e-3;
    detail << "(c) smooth lift error " << num(prev) << (smooth_ok ? " decreasing" : " NOT decreasing");

    const auto levels = geometric_oracle(c, 5, jobs);
    bool mono = true;
    for (std::size_t l = 1; l < levels.size(); ++l)
      mono = mono && levels[l].mean_rel_error < levels[l - 1].mean_rel_error;
    const double finest = levels.back().max_rel_error;
    ok = ok && mono && finest < c.oracle_tolerance;
    detail << "; fBm mean errors";
    for (const auto& l : levels) detail << ' ' << num(l.mean_rel_error);
    detail << (mono ? " (monotone)" : " (NOT monotone)") << ", worst at n=" << levels.back().steps
           << ": " << num(finest) << " (limit 1e-3)";
  }
  return finish(5, "exact-oracles", 120.0, ok, detail.str(), sw);
}

// 6 -------------------------------------------------------------------------

CheckResult check_composition() {
  Stopwatch sw;
  ExperimentConfig c;
  c.sigma = 0.1;
  const auto s = amplitude_sweep(c);
  const bool ok = s.r2_affine >= 0.999;
  return finish(6, "affine-composition", 60.0, ok,
                "R^2 " + num(s.r2_affine) + " for the affine fit over lambda {1,2,4,8}; slope " +
                    num(s.slope) + ", quadratic coefficient " + num(s.quadratic_coefficient),
                sw);
}

// 7 -------------------------------------------------------------------------

CheckResult check_globalization(unsigned jobs) {
  Stopwatch sw;
  const double horizons[] = {1.0, 2.0, 4.0};
  struct Row {
    bool ok = false;
    std::string text;
  };
  std::vector<Row> rows(3);
  parallel_for(3, jobs, [&](std::size_t i) {
    ExperimentConfig c = torus_scenario();
    c.horizon = horizons[i];
    c.steps = static_cast<std::size_t>(256 * horizons[i]);
    const RoughPath X = make_rough_path(c, c.seed);
    const auto coeffs = make_coefficients(c);
    const auto y0 = initial_field(c);
    const SolverConfig cfg = solver_config(c, X.alpha());
    std::ostringstream t;
    t << "T=" << horizons[i] << ": ";
    try {
      const auto rec = global_solve(y0, coeffs, X, cfg);
      const auto fit = apriori_monitor(rec);
      const double r = std::max(1.0, norm_gamma(y0, cfg.gamma));
      const double two_c = 2.0 * rec.constants.bound_constant;
      double growth = 0.0;
      for (std::size_t k = 0; k < rec.windows.size(); ++k)
        growth = std::max(growth, rec.windows[k].sup_norm /
                                      (std::pow(two_c, static_cast<double>(k + 1)) * r));
      double split_gap = 0.0;
      for (std::size_t k : {1, 2, 4}) {
        SolverConfig a = cfg, b = cfg;
        a.fixed_windows = k;
        b.fixed_windows = 2 * k;
        const auto ra = global_solve(y0, coeffs, X, a);
        const auto rb = global_solve(y0, coeffs, X, b);
        const double scale = std::max(1.0, sup_norm(ra.trajectory.y, cfg.gamma));
        split_gap = std::max(split_gap, max_trajectory_gap(ra, rb, cfg.gamma) / scale);
      }
      const bool ok = fit.ok && growth <= 1.0 && split_gap <= 10.0 * cfg.picard_tol;
      t << rec.windows.size() << " windows, C " << num(rec.constants.bound_constant) << ", M2 "
        << num(fit.m2) << (fit.ok ? "" : " (a-priori fit NOT ok)") << ", sup/(2C)^(k+1)r "
        << num(growth) << ", k vs 2k gap " << num(split_gap);
      rows[i] = {ok, t.str()};
    } catch (const std::exception& e) {
      rows[i] = {false, t.str() + e.what()};
    }
  });
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    ok = ok && r.ok;
    detail += (detail.empty() ? "" : "; ") + r.text;
  }
  return finish(7, "globalization", 300.0, ok, detail, sw);
}

// 8 -------------------------------------------------------------------------

CheckResult check_cocycle(unsigned jobs) {
  Stopwatch sw;
  ExperimentConfig lin;
  lin.preset = "linear_g";
  lin.lambda = 0.5;
  const ExperimentConfig torus = torus_scenario();
  ExperimentConfig still = torus;
  still.preset = "custom";
  still.drift = "0";
  still.lambda = 0.0;

  // {config, split time, must be exactly zero}
  struct Case {
    ExperimentConfig c;
    double split;
    bool exact;
    const char* label;
  };
  const Case cases[] = {
      {lin, 0.5, false, "linear G"},  {torus, 0.5, false, "torus preset"},
      {lin, 0.0, true, "tau = 0"},    {still, 0.5, true, "F = G = 0"},
  };
  std::vector<double> disc(std::size(cases));
  parallel_for(disc.size(), jobs, [&](std::size_t i) {
    const auto& k = cases[i];
    const RoughPath X = make_rough_path(k.c, k.c.seed);
    Coefficients co = make_coefficients(k.c);
    if (k.exact && k.c.lambda == 0.0) co = zero_coefficients();
    disc[i] = cocycle_check(initial_field(k.c), co, X, X.grid().index_of(k.split),
                            solver_config(k.c, X.alpha()));
  });
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < disc.size(); ++i) {
    ok = ok && (cases[i].exact ? disc[i] == 0.0 : disc[i] < 1e-6);
    detail += (i ? ", " : "") + std::string(cases[i].label) + " " + num(disc[i]);
  }
  return finish(8, "cocycle", 60.0, ok, detail + " (limits 1e-6, exact zeros)", sw);
}

// 9 -------------------------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files.emplace_back(fs::relative(e.path(), dir).generic_string(),
                       std::string(std::istreambuf_iterator<char>(in), {}));
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

CheckResult check_determinism(const fs::path& scratch, unsigned jobs) {
  Stopwatch sw;
  const std::vector<std::vector<std::string>> commands = {
      {"lift", "--set", "steps=256"},
      {"solve", "--set", "steps=128", "--set", "sigma=0.1"},
      {"solve", "--set", "steps=64", "--set", "seeds=[1,2,3]", "--set", "preset=linear_g"},
      {"converge", "--set", "depths=[0,1]", "--set", "refinement_steps=[32,64]", "--set",
       "oracle_seeds=2", "--set", "probe_seeds=2", "--set", "probe_steps=64", "--set",
       "max_window_steps=16", "--set", "steps=64"},
      {"cocycle", "--set", "steps=128", "--set", "preset=linear_g"},
  };
  bool ok = true;
  std::string detail;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::vector<std::pair<std::string, std::string>>> snaps;
    std::vector<std::string> outputs;
    std::vector<int> codes;
    // Second repeat runs with extra workers; ordering must not depend on them.
    for (unsigned rep = 0; rep < 2; ++rep) {
      const fs::path dir = scratch / ("run" + std::to_string(i)) / ("rep" + std::to_string(rep));
      std::error_code ec;
      fs::remove_all(dir, ec);
      auto args = commands[i];
      args.insert(args.end(), {"--out", dir.string(), "--jobs", std::to_string(rep == 0 ? 1 : std::max(2u, jobs))});
      std::ostringstream out, err;
      codes.push_back(run(args, out, err));
      std::string text = out.str();
      // Paths differ between the two repeats by construction.
      for (std::size_t p; (p = text.find(dir.string())) != std::string::npos;)
        text.replace(p, dir.string().size(), "<out>");
      outputs.push_back(text);
      snaps.push_back(snapshot(dir));
    }
    for (auto& snap : snaps)
      for (auto& [name, body] : snap)
        if (name == "config.json") body.clear();
    const bool same = codes[0] == codes[1] && outputs[0] == outputs[1] && snaps[0] == snaps[1] &&
                      !snaps[0].empty() && codes[0] != kInvalidConfig && codes[0] != kIoFailure;
    compared += snaps[0].size();
    ok = ok && same;
    if (!same) detail += commands[i][0] + " differs; ";
  }
  detail += std::to_string(commands.size()) + " commands, " + std::to_string(compared) +
            " files byte-identical across reruns" + (ok ? "" : " (NOT all)");
  return finish(9, "determinism", 900.0, ok, detail, sw);
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> run_checks(const CheckOptions& opts) {
  auto wanted = [&](int id) {
    return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), id) != opts.only.end();
  };
  const fs::path scratch = opts.scratch.empty() ? fs::temp_directory_path() / "rpde-check" : opts.scratch;
  std::vector<CheckResult> results;
  Stopwatch total;
  auto record = [&](CheckResult r) {
    if (opts.log) *opts.log << format_check(r) << std::endl;
    results.push_back(std::move(r));
  };
  if (wanted(1)) record(check_chen(opts.jobs));
  if (wanted(2)) record(check_interpolation());
  if (wanted(3)) record(check_semigroup());
  if (wanted(4)) record(check_sewing(opts.jobs));
  if (wanted(5)) record(check_oracles(opts.jobs));
  if (wanted(6)) record(check_composition());
  if (wanted(7)) record(check_globalization(opts.jobs));
  if (wanted(8)) record(check_cocycle(opts.jobs));
  if (wanted(9)) {
    CheckResult r = check_determinism(scratch, opts.jobs);
    const double suite = total.seconds();
    r.detail += "; suite " + num(suite) + "s (limit 900s)";
    r.passed = r.passed && suite < 900.0;
    record(std::move(r));
  }
  return results;
}

std::string format_check(const CheckResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %d %-26s %7.2fs/%gs  ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.budget_seconds);
  return head + r.detail;
}

std::string checks_csv(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << "id,name,passed,detail\n";
  for (const auto& r : results) {
    std::string d = r.detail;
    std::replace(d.begin(), d.end(), '"', '\'');
    out << r.id << ',' << r.name << ',' << (r.passed ? 1 : 0) << ",\"" << d << "\"\n";
  }
  return out.str();
}

}  // namespace rpde::cli
