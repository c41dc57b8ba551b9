#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epsweep {

/// Overrides the configured output directory when --out is not given.
inline constexpr const char* kOutDirEnv = "EPSWEEP_OUT_DIR";

/// Entry point behind the executable; `args` excludes the program name.
/// Returns 0 on success, 1 for invalid input, 2 for numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace epsweep
