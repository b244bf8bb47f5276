#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpde_cli/config.hpp"

namespace rpde::cli {

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kInvalidConfig = 2,
  kBlowUp = 3,
  kProbeFailed = 4,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name: {"solve", "--config", "run.json", "--set", "steps=128"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// $RPDE_OUT_ROOT (or ".") joined with `requested`, `config.output` or
/// "rpde-out/<command>", whichever is set first.
std::filesystem::path output_dir(const ExperimentConfig& c, const std::string& requested,
                                 const std::string& command);

int cmd_lift(const ExperimentConfig& c, const std::filesystem::path& dir, unsigned jobs,
             std::ostream& out, std::ostream& err);
int cmd_solve(const ExperimentConfig& c, const std::filesystem::path& dir, unsigned jobs,
              std::ostream& out, std::ostream& err);
int cmd_converge(const ExperimentConfig& c, const std::filesystem::path& dir, unsigned jobs,
                 std::ostream& out, std::ostream& err);
int cmd_cocycle(const ExperimentConfig& c, const std::filesystem::path& dir, unsigned jobs,
                std::ostream& out, std::ostream& err);

}  // namespace rpde::cli
