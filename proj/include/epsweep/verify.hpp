#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace epsweep {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct VerifyOptions {
    std::size_t random_trials = 10000;
    std::uint64_t seed = 20240917;
    /// Restrict the per-scenario checks to these names (all when empty).
    std::vector<std::string> scenarios;
};

/// Solver-level identities on random matrices plus per-scenario sweep
/// invariants over the registry.
std::vector<CheckResult> run_invariants(const VerifyOptions& options = {});

void print_table(const std::vector<CheckResult>& checks, std::ostream& out);

} // namespace epsweep
