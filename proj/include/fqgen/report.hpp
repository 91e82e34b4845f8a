#pragma once

#include <ostream>

#include "fqgen/common.hpp"

namespace fqgen {

// Run the full desk-scale acceptance checklist, printing one PASS/FAIL line
// per criterion to `out`.  Returns the number of failed criteria (0 = all
// pass).  `seed` feeds every Monte Carlo step; `workers` sizes the thread
// pool (results are identical for any worker count).
int run_acceptance(u64 seed, u32 workers, std::ostream& out);

}  // namespace fqgen
