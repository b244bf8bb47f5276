// One line per acceptance criterion; exit status is nonzero if any fails.

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "rpde_cli/checks.hpp"

int main(int argc, char** argv) {
  rpde::cli::CheckOptions opts;
  opts.scratch = std::filesystem::temp_directory_path() / "rpde-acceptance";
  opts.jobs = std::max(2u, std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--scratch") == 0 && i + 1 < argc) {
      opts.scratch = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      opts.only.push_back(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--scratch DIR] [--only N]...\n";
      return 2;
    }
  }
  opts.log = &std::cout;
  const auto results = rpde::cli::run_checks(opts);
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const rpde::cli::CheckResult& r) { return !r.passed; });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed == 0 ? 0 : 1;
}
