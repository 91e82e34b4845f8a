// Acceptance checklist: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <cstdlib>
#include <iostream>
#include <string>

#include "fqgen/report.hpp"

int main(int argc, char** argv) {
  fqgen::u64 seed = 42;
  fqgen::u32 workers = 4;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--seed")
      seed = std::strtoull(argv[i + 1], nullptr, 10);
    else if (flag == "--workers")
      workers = static_cast<fqgen::u32>(std::strtoul(argv[i + 1], nullptr, 10));
  }
  const int failures = fqgen::run_acceptance(seed, workers, std::cout);
  return failures == 0 ? 0 : 1;
}
