#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rpde::cli {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

struct CheckOptions {
  unsigned jobs = 1;
  std::vector<int> only;              ///< empty: all criteria
  std::filesystem::path scratch;      ///< working area for the determinism runs
  std::ostream* log = nullptr;        ///< one line per finished criterion
};

CheckResult check_chen(unsigned jobs);
CheckResult check_interpolation();
CheckResult check_semigroup();
CheckResult check_sewing(unsigned jobs);
CheckResult check_oracles(unsigned jobs);
CheckResult check_composition();
CheckResult check_globalization(unsigned jobs);
CheckResult check_cocycle(unsigned jobs);
CheckResult check_determinism(const std::filesystem::path& scratch, unsigned jobs);

/// Runs the selected criteria in order. Criterion 9 also requires the whole
/// run to stay inside its budget.
std::vector<CheckResult> run_checks(const CheckOptions& opts);

/// "PASS  4 sewing-rates  12.3s/120s  <detail>"
std::string format_check(const CheckResult& r);
/// id,name,passed,detail (no timings, so reruns compare equal).
std::string checks_csv(const std::vector<CheckResult>& results);

}  // namespace rpde::cli
