#include <iostream>
#include <string>
#include <vector>

#include "skewlim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return skewlim::run_cli(args, std::cout, std::cerr);
}
