#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "theia/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::optional<std::string> profile;
  if (const char* env = std::getenv("THEIA_LINT_PROFILE")) profile = env;
  return theia::cli::run(args, std::cout, std::cerr, profile);
}
