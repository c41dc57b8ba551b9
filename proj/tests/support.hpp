#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "epsweep/linalg.hpp"
#include "oracles.hpp"

namespace testsupport {

inline epsweep::ComplexMatrix to_matrix(const oracle::Mat& m) {
    epsweep::ComplexMatrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m[i][j];
    return out;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("epsweep-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testsupport
