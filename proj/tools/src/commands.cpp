#include "rpde_cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rpde/error.hpp"
#include "rpde/io.hpp"
#include "rpde_cli/checks.hpp"
#include "rpde_cli/scenario.hpp"

namespace rpde::cli {

namespace fs = std::filesystem;
using io::format_double;

namespace {

void write_file(const fs::path& file, const std::string& contents) {
  try {
    io::write_text_file(file, contents);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

void write_config(const ExperimentConfig& c, const fs::path& dir) {
  write_file(dir / "config.json", config_to_json(c).dump(2) + "\n");
}

fs::path seed_dir(const fs::path& dir, const ExperimentConfig& c, std::uint64_t seed) {
  return c.seeds.empty() ? dir : dir / ("seed" + std::to_string(seed));
}

}  // namespace

fs::path output_dir(const ExperimentConfig& c, const std::string& requested,
                    const std::string& command) {
  const char* root = std::getenv("RPDE_OUT_ROOT");
  const fs::path base = root && *root ? fs::path(root) : fs::path(".");
  if (!requested.empty()) return base / requested;
  if (!c.output.empty()) return base / c.output;
  return base / "rpde-out" / command;
}

// ------------------------------------------------------------------ lift

int cmd_lift(const ExperimentConfig& c, const fs::path& dir, unsigned jobs, std::ostream& out,
             std::ostream&) {
  const auto seeds = c.run_seeds();
  std::vector<std::string> lines(seeds.size());
  std::vector<bool> ok(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    const RoughPath X = fbm_lift({c.hurst, c.steps, c.horizon, seeds[i], c.effective_alpha()});
    const fs::path file = c.seeds.empty()
                              ? dir / "rough_path.csv"
                              : dir / ("rough_path_seed" + std::to_string(seeds[i]) + ".csv");
    try {
      io::save_rough_path(file, X);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    const RoughPath back = io::load_rough_path(file);
    const double defect = chen_defect(materialize_x2_table(back), back.x());
    ok[i] = defect < 1e-12;
    lines[i] = "seed=" + std::to_string(seeds[i]) + " chen_defect=" + format_double(defect) +
               " holder_x=" + format_double(first_level_holder(back)) +
               " holder_x2=" + format_double(second_level_holder(back)) +
               " rho_alpha=" + format_double(rho_alpha(back)) + " file=" + file.string();
  });
  write_config(c, dir);
  for (const auto& l : lines) out << l << '\n';
  return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }) ? kOk : kProbeFailed;
}

// ------------------------------------------------------------------ solve

namespace {

struct SolveOutcome {
  int code = kOk;
  std::string summary;
  std::string diagnostic;
};

SolveOutcome solve_one(const ExperimentConfig& c, std::uint64_t seed, const fs::path& dir) {
  SolveOutcome res;
  const RoughPath X = make_rough_path(c, seed);
  const SolverConfig cfg = solver_config(c, X.alpha());
  const Coefficients coeffs = make_coefficients(c);
  const SpectralField y0 = initial_field(c);
  const std::string tag = "seed=" + std::to_string(seed);

  SolutionRecord rec;
  try {
    rec = global_solve(y0, coeffs, X, cfg);
  } catch (const BlowUpError& e) {
    std::ostringstream h;
    h << "t,norm_gamma\n";
    for (std::size_t i = 0; i < e.history.size(); ++i)
      h << format_double(X.grid()[i]) << ',' << format_double(e.history[i]) << '\n';
    write_file(dir / "blowup_history.csv", h.str());
    res.code = kBlowUp;
    res.diagnostic = tag + " blow-up: " + e.what();
    return res;
  } catch (const NonContractionError& e) {
    res.code = kBlowUp;
    res.diagnostic = tag + " no contraction: " + e.what();
    return res;
  }

  const auto residual = mild_residual_profile(rec, coeffs, X, cfg);
  const double worst = *std::max_element(residual.begin(), residual.end());
  const double threshold = c.residual_factor * c.picard_tol;
  const AprioriFit fit = apriori_monitor(rec);

  std::ostringstream sol;
  sol << "t,norm_gamma,norm_gamma_minus_alpha,residual\n";
  for (std::size_t i = 0; i < rec.trajectory.y.size(); ++i)
    sol << format_double(X.grid()[i]) << ',' << format_double(rec.sup_norm_history[i]) << ','
        << format_double(norm_gamma(rec.trajectory.y[i], cfg.gamma - X.alpha())) << ','
        << format_double(residual[i]) << '\n';
  write_file(dir / "solution.csv", sol.str());

  std::ostringstream win, norms;
  win << "start,end,iters,contraction,gubinelli_norm,start_norm,sup_norm,bound_constant\n";
  norms << "window,";
  io::write_norm_header(norms);
  for (std::size_t k = 0; k < rec.windows.size(); ++k) {
    const auto& w = rec.windows[k];
    win << format_double(w.start) << ',' << format_double(w.end) << ',' << w.iterations << ','
        << format_double(w.contraction) << ',' << format_double(w.norm.total) << ','
        << format_double(w.start_norm) << ',' << format_double(w.sup_norm) << ','
        << format_double(w.bound_constant) << '\n';
    norms << k << ',';
    io::write_norm_row(norms, w.norm);
  }
  write_file(dir / "windows.csv", win.str());
  write_file(dir / "norms.csv", norms.str());

  std::ostringstream state;
  io::write_field(state, rec.trajectory.y.back());
  write_file(dir / "final_state.csv", state.str());

  nlohmann::ordered_json k;
  k["bound_constant"] = rec.constants.bound_constant;
  k["pilot_constant"] = rec.constants.pilot_constant;
  k["composition_constant"] = rec.constants.composition_constant;
  k["eta"] = rec.constants.eta;
  k["window_length"] = rec.constants.window_length;
  k["windows"] = rec.windows.size();
  k["m1"] = fit.m1;
  k["m2"] = fit.m2;
  k["m2_half"] = fit.m2_half;
  k["apriori_ok"] = fit.ok;
  k["mild_residual"] = worst;
  k["residual_threshold"] = threshold;
  k["rough_path"] = X.provenance();
  write_file(dir / "constants.json", k.dump(2) + "\n");

  res.summary = tag + " windows=" + std::to_string(rec.windows.size()) +
                " C=" + format_double(rec.constants.bound_constant) +
                " mild_residual=" + format_double(worst) + " threshold=" + format_double(threshold) +
                " M1=" + format_double(fit.m1) + " M2=" + format_double(fit.m2);
  if (!(worst <= threshold)) {
    res.code = kProbeFailed;
    res.diagnostic = tag + " mild residual above threshold";
  }
  return res;
}

}  // namespace

int cmd_solve(const ExperimentConfig& c, const fs::path& dir, unsigned jobs, std::ostream& out,
              std::ostream& err) {
  const auto seeds = c.run_seeds();
  std::vector<SolveOutcome> res(seeds.size());
  parallel_for(seeds.size(), jobs,
               [&](std::size_t i) { res[i] = solve_one(c, seeds[i], seed_dir(dir, c, seeds[i])); });
  write_config(c, dir);
  int code = kOk;
  for (const auto& r : res) {
    if (!r.summary.empty()) out << r.summary << '\n';
    if (!r.diagnostic.empty()) err << r.diagnostic << '\n';
    code = std::max(code, r.code == kBlowUp ? 10 : r.code);
  }
  return code == 10 ? kBlowUp : code;
}

// ------------------------------------------------------------------ converge

int cmd_converge(const ExperimentConfig& c, const fs::path& dir, unsigned jobs, std::ostream& out,
                 std::ostream&) {
  bool ok = true;
  const auto rows = sewing_suite(c, jobs);
  const auto betas = c.effective_betas();

  std::vector<std::vector<OracleLevel>> oracle;
  for (unsigned d : c.depths) oracle.push_back(geometric_oracle(c, d, jobs));

  std::ostringstream rates, orc;
  std::vector<std::ostringstream> windows(c.depths.size());
  for (auto& w : windows) w << "window,beta,error,fitted_rate\n";
  rates << "depth,beta,floor,fitted_rate,passed";
  for (auto n : c.refinement_steps) rates << ",oracle_err_n" << n;
  rates << '\n';
  orc << "depth,steps,mean_rel_error,max_rel_error\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& p = rows[i].probe;
    const auto& levels = oracle[i / betas.size()];
    ok = ok && p.passed();
    rates << rows[i].depth << ',' << format_double(p.beta) << ',' << format_double(p.floor) << ','
          << format_double(p.fitted_rate) << ',' << (p.passed() ? 1 : 0);
    for (const auto& l : levels) rates << ',' << format_double(l.mean_rel_error);
    rates << '\n';
    for (const auto& w : p.rows)
      windows[i / betas.size()] << format_double(w.window_length) << ',' << format_double(p.beta)
                                << ',' << format_double(w.mean_error) << ','
                                << format_double(p.fitted_rate) << '\n';
  }
  for (std::size_t d = 0; d < c.depths.size(); ++d) {
    const auto& levels = oracle[d];
    for (std::size_t l = 0; l < levels.size(); ++l) {
      orc << c.depths[d] << ',' << levels[l].steps << ',' << format_double(levels[l].mean_rel_error)
          << ',' << format_double(levels[l].max_rel_error) << '\n';
      if (l > 0 && !(levels[l].mean_rel_error < levels[l - 1].mean_rel_error)) ok = false;
    }
    if (!(levels.back().max_rel_error < c.oracle_tolerance)) ok = false;
  }

  const auto sweep = amplitude_sweep(c);
  std::ostringstream amp;
  amp << "lambda,norm_out\n";
  for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
    amp << format_double(sweep.lambdas[i]) << ',' << format_double(sweep.norms[i]) << '\n';
  ok = ok && sweep.r2_affine >= c.affine_r2;

  write_file(dir / "rates.csv", rates.str());
  for (std::size_t d = 0; d < c.depths.size(); ++d)
    write_file(dir / ("sewing_windows_depth" + std::to_string(c.depths[d]) + ".csv"),
               windows[d].str());
  write_file(dir / "oracle.csv", orc.str());
  write_file(dir / "amplitude.csv", amp.str());
  write_config(c, dir);

  for (const auto& r : rows)
    out << "depth=" << r.depth << " beta=" << format_double(r.probe.beta)
        << " rate=" << format_double(r.probe.fitted_rate)
        << " floor=" << format_double(r.probe.floor) << (r.probe.passed() ? " ok" : " FAIL") << '\n';
  const auto& last = oracle.back();
  out << "oracle depth=" << c.depths.back() << " n=" << last.back().steps
      << " max_rel_error=" << format_double(last.back().max_rel_error)
      << " tolerance=" << format_double(c.oracle_tolerance) << '\n';
  out << "amplitude slope=" << format_double(sweep.slope)
      << " intercept=" << format_double(sweep.intercept)
      << " r2=" << format_double(sweep.r2_affine)
      << " quadratic_coefficient=" << format_double(sweep.quadratic_coefficient) << '\n';
  return ok ? kOk : kProbeFailed;
}

// ------------------------------------------------------------------ cocycle

int cmd_cocycle(const ExperimentConfig& c, const fs::path& dir, unsigned jobs, std::ostream& out,
                std::ostream&) {
  const auto seeds = c.run_seeds();
  std::vector<double> disc(seeds.size());
  std::vector<std::size_t> split(seeds.size());
  // Alignment is checked before any solve so misuse exits 2, not mid-run.
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const RoughPath X = make_rough_path(c, seeds[i]);
    try {
      split[i] = X.grid().index_of(c.split);
    } catch (const InvalidArgument& e) {
      throw ConfigError("split " + format_double(c.split) + " is not a grid point: " + e.what());
    }
    if (split[i] >= X.steps()) throw ConfigError("split must lie before the horizon");
  }
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    const RoughPath X = make_rough_path(c, seeds[i]);
    disc[i] = cocycle_check(initial_field(c), make_coefficients(c), X, split[i],
                            solver_config(c, X.alpha()));
  });
  std::ostringstream csv;
  csv << "seed,split,discrepancy\n";
  bool ok = true;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    csv << seeds[i] << ',' << format_double(c.split) << ',' << format_double(disc[i]) << '\n';
    out << "seed=" << seeds[i] << " split=" << format_double(c.split)
        << " discrepancy=" << format_double(disc[i])
        << " threshold=" << format_double(c.cocycle_threshold) << '\n';
    ok = ok && disc[i] < c.cocycle_threshold;
  }
  write_file(dir / "cocycle.csv", csv.str());
  write_config(c, dir);
  return ok ? kOk : kProbeFailed;
}

// ------------------------------------------------------------------ dispatch

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rough evolution equations on the torus: lifts, solves, rates and checks", "rpde"};
  app.require_subcommand(1);
  std::string config_path, requested_out;
  std::vector<std::string> overrides;
  unsigned jobs = 1;
  std::vector<int> only;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("-s,--set", overrides, "override a config field: key=value")->take_all();
    sub->add_option("-o,--out", requested_out, "output directory (under $RPDE_OUT_ROOT)");
    sub->add_option("-j,--jobs", jobs, "worker threads across independent seeds")
        ->check(CLI::Range(1u, 256u));
  };
  auto* lift = app.add_subcommand("lift", "sample and serialize an fBm rough path");
  auto* solve = app.add_subcommand("solve", "global solve with residual and a-priori diagnostics");
  auto* converge = app.add_subcommand("converge", "sewing rates, oracle errors, amplitude sweep");
  auto* cocycle = app.add_subcommand("cocycle", "cocycle discrepancy at a split time");
  auto* check = app.add_subcommand("check", "run the acceptance suite");
  for (auto* s : {lift, solve, converge, cocycle, check}) add_common(s);
  check->add_option("--only", only, "criterion numbers to run");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }

  ExperimentConfig cfg;
  try {
    auto j = load_config_json(config_path);
    for (const auto& o : overrides) apply_override(j, o);
    cfg = config_from_json(j);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const IoError& e) {
    err << "i/o failure: " << e.what() << '\n';
    return kIoFailure;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const fs::path dir = output_dir(cfg, requested_out, name);
  try {
    if (name == "lift") return cmd_lift(cfg, dir, jobs, out, err);
    if (name == "solve") return cmd_solve(cfg, dir, jobs, out, err);
    if (name == "converge") return cmd_converge(cfg, dir, jobs, out, err);
    if (name == "cocycle") return cmd_cocycle(cfg, dir, jobs, out, err);
    CheckOptions opts;
    opts.jobs = jobs;
    opts.only = only;
    opts.scratch = dir / "scratch";
    opts.log = &out;
    const auto results = run_checks(opts);
    write_file(dir / "checks.csv", checks_csv(results));
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; })
               ? kOk
               : kProbeFailed;
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const IoError& e) {
    err << "i/o failure: " << e.what() << '\n';
    return kIoFailure;
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << '\n';
    return kBlowUp;
  } catch (const NonContractionError& e) {
    err << "no contraction: " << e.what() << '\n';
    return kBlowUp;
  } catch (const NonCauchyError& e) {
    err << "probe failed: " << e.what() << '\n';
    return kProbeFailed;
  } catch (const CovarianceFactorizationError& e) {
    err << "probe failed: " << e.what() << '\n';
    return kProbeFailed;
  } catch (const std::ios_base::failure& e) {
    err << "i/o failure: " << e.what() << '\n';
    return kIoFailure;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::runtime_error& e) {
    // load_rough_path and friends signal unreadable files this way.
    err << "i/o failure: " << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace rpde::cli
