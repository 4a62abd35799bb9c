#pragma once

#include <string>
#include <vector>

#include "tdm/io.hpp"
#include "tdm/road_graph.hpp"

namespace tdm {

/// Nodes as labelled circles over straight edges, the curvature-domain disk
/// when kappa < 0, fitted to the viewport with a 5% margin. Only the first
/// two coordinates are drawn. Output bytes depend only on the inputs.
std::string render_svg(const LabeledLayout& layout);

/// As above, with one line per vertex pair joined by an arc. Throws
/// IdMismatch unless the layout and graph name the same vertices.
std::string render_svg(const LabeledLayout& layout, const RoadGraph& graph);

struct PlotSeries {
  std::string label;
  std::vector<double> values;
};

/// Log-scale line chart of stress trajectories against iteration.
std::string render_trajectory_plot(const std::vector<PlotSeries>& series, const std::string& title);

} // namespace tdm
