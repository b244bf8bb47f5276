#include <iostream>
#include <string>
#include <vector>

#include "rpde_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rpde::cli::run(args, std::cout, std::cerr);
}
