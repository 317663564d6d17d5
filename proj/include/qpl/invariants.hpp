#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpl {

struct InvariantResult {
    std::string name;
    long cases = 0;
    long failures = 0;
    std::string first_failure;
};

// Randomized core-layer checks: Teichmuller, log/exp round trips,
// integer q-powers and precision monotonicity.
std::vector<InvariantResult> run_core_invariants(std::uint64_t seed, long cases_per_suite = 1000);

}  // namespace qpl
