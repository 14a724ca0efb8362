#include <iostream>
#include <string>
#include <vector>

#include "ricb_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ricb::cli::run_cli(args, std::cout, std::cerr);
}
