#pragma once

#include <string>
#include <vector>

namespace bpg {

/// One polyline on the log-error plot.
struct SvgSeries {
  std::string label;
  std::string color;         // css color
  std::string dash;          // "" solid, else stroke-dasharray value
  std::vector<double> x;     // step indices
  std::vector<double> y;     // positive values; clamped at 1e-16 for display
};

/// Deterministic log-scale line plot: fixed canvas, fixed float formatting,
/// no timestamps, so identical inputs produce identical bytes.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series);

/// fixed palette for per-index coloring
std::string series_color(int idx);

} // namespace bpg
