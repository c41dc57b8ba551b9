#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "epsweep/sweep.hpp"

namespace epsweep {

enum class PlotKind { Energies, Widths, Mixing };

struct Panel {
    const SweepResult* result;
    PlotKind kind;
    std::string title;
    /// Mixing only: which eigenstate's |b_ij|² to draw.
    std::size_t state = 0;
};

/// SVG text for a grid of panels, filled row by row.
std::string render_svg(const std::vector<Panel>& panels, std::size_t columns);

/// Energies and widths: one panel. Mixing: one panel per eigenstate.
/// Throws ValidationError on an empty result without creating the file.
std::filesystem::path emit_plot(const SweepResult& result, PlotKind kind, const std::filesystem::path& dest,
                                const std::string& title = {});

/// Composite figure: panels laid out in `columns`, written to `dest`.
std::filesystem::path emit_figure(const std::vector<Panel>& panels, std::size_t columns,
                                  const std::filesystem::path& dest);

} // namespace epsweep
