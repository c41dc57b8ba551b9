#pragma once

#include <cstddef>
#include <vector>

namespace epsweep {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
/// O(n³)). Returns col[i], the column assigned to row i.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

} // namespace epsweep
