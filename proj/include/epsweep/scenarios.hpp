#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "epsweep/model.hpp"

namespace epsweep {

/// Uniform grid of `steps` points from a_min to a_max inclusive.
struct Grid {
    double a_min = 0.0;
    double a_max = 1.0;
    std::size_t steps = 2001;

    std::vector<std::string> problems() const;
    std::vector<double> points() const;
    double step() const noexcept { return (a_max - a_min) / static_cast<double>(steps - 1); }

    friend bool operator==(const Grid&, const Grid&) = default;
};

enum class FigureKind { Trajectories, Mixing };

struct Scenario {
    std::string name;    // e.g. "fig3cd"
    std::string family;  // e.g. "fig3"
    std::string panels;  // e.g. "c,d"
    std::string summary;
    ModelSpec spec;
    Grid grid;
    FigureKind kind = FigureKind::Trajectories;
};

const std::vector<Scenario>& scenario_registry();
std::vector<std::string> scenario_names();
std::vector<std::string> family_names();
bool is_family(std::string_view name);
/// Members of a family in panel order.
std::vector<Scenario> family(std::string_view name);
/// Throws UnknownScenario listing valid names.
const Scenario& scenario(std::string_view name);

} // namespace epsweep
