#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixtopo/ridgeline.hpp"

namespace mixtopo {

// Convenience renderings only; CSV is the bit-specified output.

struct LineSeries {
    std::vector<std::pair<double, double>> points;
};

/// Simple line plot with axes and tick labels. hline, when given, draws a
/// dashed horizontal reference line (used for the mixing-weight level).
std::string svg_line_plot(const LineSeries& series, const std::string& x_label,
                          const std::string& y_label,
                          std::optional<double> hline = {});

/// Triangle scatter of a barycentric elevation grid, colored by h, local
/// maxima marked. Dense grids are strided down to about 120 nodes per edge.
std::string svg_triangle_plot(const std::vector<TriangleNode>& grid);

} // namespace mixtopo
