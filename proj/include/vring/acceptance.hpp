#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vring {

struct AcceptanceOptions {
    std::vector<int> only;                    // criteria to run (empty: all)
    std::string work_dir = "vring-acceptance"; // artifact directory for file-writing criteria
    int threads = 1;                           // worker cap for the heavy criteria
};

// Runs the acceptance suite and prints one [PASS]/[FAIL] line per criterion
// with the measured numbers. Returns the number of failed criteria.
int run_acceptance(const AcceptanceOptions& opts, std::ostream& out);

} // namespace vring
