#pragma once

#include <string>
#include <string_view>

#include "tdm/road_graph.hpp"

namespace tdm {

/// Synthetic test families with two-way unit-time edges, so shortest-path
/// distances are hop counts. Vertex ids are v0, v1, ... in index order.
RoadGraph grid_graph(std::size_t rows, std::size_t cols);
/// Balanced binary tree with 2^(depth + 1) - 1 vertices, heap ordered.
RoadGraph binary_tree_graph(std::size_t depth);
RoadGraph cycle_graph(std::size_t n);
RoadGraph complete_graph(std::size_t n);

/// Parses "grid:6", "grid:6x4", "tree:3", "cycle:5" or "complete:4".
/// Throws std::invalid_argument.
RoadGraph family_graph(std::string_view descriptor);

} // namespace tdm
