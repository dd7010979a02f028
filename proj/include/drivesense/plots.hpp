#pragma once

#include "drivesense/pipeline.hpp"

namespace drivesense {

/// Emits the result displays of a run: one SVG time-series plot per estimated
/// parameter, a physiology overlay, a correlation bar chart, and a CSV twin
/// of every plot. Returns the file names written (relative to out_dir);
/// empty-series plots are skipped with a notice on the returned list.
std::vector<std::string> emit_plots(const RunReport& report,
                                    const SignalSeries& physiology,
                                    const std::string& out_dir);

/// Single time-series polyline SVG.
std::string render_line_svg(const std::string& title,
                            const std::vector<double>& t_seconds,
                            const std::vector<double>& values);

/// Horizontal bar chart SVG (one bar per labeled value in [-1, 1]).
std::string render_bar_svg(const std::string& title,
                           const std::vector<std::pair<std::string, double>>& bars);

}  // namespace drivesense
