#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qbisect {

// Input file could not be parsed into a valid graph.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A size or resource cap was exceeded (enumeration cap, qubit cap, ...),
// or a requested computation is structurally impossible.
struct feasibility_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sampling run exhausted its restart budget. Carries the per-iteration
// success probabilities observed so far so a caller can diagnose a poorly
// chosen dummy-qubit count.
struct restart_limit_error : std::runtime_error {
    restart_limit_error(const std::string& msg, std::vector<double> probs)
        : std::runtime_error(msg), iteration_probs(std::move(probs)) {}
    std::vector<double> iteration_probs;
};

} // namespace qbisect
