#include <iostream>
#include <string>
#include <vector>

#include "fqgen/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fqgen::run_cli(args, std::cout, std::cerr);
}
