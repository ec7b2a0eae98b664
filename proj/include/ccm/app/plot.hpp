#pragma once

#include "ccm/engine.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace ccm::app {

struct PlotOutput {
    std::filesystem::path svg;
    std::filesystem::path aggregates;  // CSV of the plotted means and bands
};

/// SVG of mean rho against L, one curve per (direction, E, tau) with a
/// +/- 1 sd band.
std::string render_convergence_svg(std::span<const ConvergenceCell> cells);

/// Reads a skills CSV and writes `out` (SVG) plus `out` with a .csv extension.
/// Throws Error(MalformedSkillsFile).
PlotOutput emit_plot(const std::filesystem::path& skills_csv, const std::filesystem::path& out);

}  // namespace ccm::app
