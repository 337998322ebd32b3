#include <iostream>
#include <string>
#include <vector>

#include "modae/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return modae::cli::run(args, std::cout, std::cerr);
}
