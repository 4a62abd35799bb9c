#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tdm/embed_core.hpp"
#include "tdm/kspace.hpp"
#include "tdm/mds_iterative.hpp"
#include "tdm/road_graph.hpp"

namespace tdm {

using ordered_json = nlohmann::ordered_json;

/// { "dims": D, "coords": { id: [..] } } in vertex order.
ordered_json layout_to_json(const std::vector<std::string>& ids, const Layout& x);
/// { "kappa": k, "dims": D, "coords": { id: [..] } }.
ordered_json klayout_to_json(const std::vector<std::string>& ids, const KLayout& kl);

struct LabeledLayout {
  std::vector<std::string> ids;
  Layout coords;
  std::optional<double> kappa;
};

/// Reads either layout form. Throws MalformedFile.
LabeledLayout parse_layout_json(std::string_view content);

/// One {"iter", "stress_raw", "stress_norm"} object per line.
void write_trajectory_jsonl(std::ostream& out, const RunRecord& record);

/// Vertices, arcs with travel times, entries and exits.
ordered_json graph_to_json(const RoadGraph& g);

} // namespace tdm
