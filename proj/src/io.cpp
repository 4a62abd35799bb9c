#include "tdm/io.hpp"

#include <ostream>

#include "tdm/errors.hpp"

namespace tdm {

namespace {

ordered_json coords_object(const std::vector<std::string>& ids, const Layout& x) {
  if (ids.size() != static_cast<std::size_t>(x.rows()))
    throw DimensionMismatch("layout rows and vertex ids disagree");
  ordered_json coords = ordered_json::object();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index k = 0; k < x.cols(); ++k) row.push_back(x(static_cast<Eigen::Index>(i), k));
    coords[ids[i]] = std::move(row);
  }
  return coords;
}

} // namespace

ordered_json layout_to_json(const std::vector<std::string>& ids, const Layout& x) {
  ordered_json j;
  j["dims"] = x.cols();
  j["coords"] = coords_object(ids, x);
  return j;
}

ordered_json klayout_to_json(const std::vector<std::string>& ids, const KLayout& kl) {
  ordered_json j;
  j["kappa"] = kl.kappa.value();
  j["dims"] = kl.coords.cols();
  j["coords"] = coords_object(ids, kl.coords);
  return j;
}

LabeledLayout parse_layout_json(std::string_view content) {
  ordered_json j;
  try {
    j = ordered_json::parse(content.begin(), content.end());
  } catch (const ordered_json::parse_error& e) {
    throw MalformedFile(std::string("invalid layout JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_number_integer() ||
      !j.contains("coords") || !j["coords"].is_object())
    throw MalformedFile("layout JSON needs integer 'dims' and object 'coords'");
  LabeledLayout out;
  const auto dims = j["dims"].get<Eigen::Index>();
  if (dims < 1) throw MalformedFile("layout dims must be positive");
  const auto& coords = j["coords"];
  out.coords.resize(static_cast<Eigen::Index>(coords.size()), dims);
  Eigen::Index row = 0;
  for (auto it = coords.begin(); it != coords.end(); ++it, ++row) {
    if (!it->is_array() || static_cast<Eigen::Index>(it->size()) != dims)
      throw MalformedFile("coordinate of '" + it.key() + "' has wrong length");
    for (Eigen::Index k = 0; k < dims; ++k) {
      const auto& v = (*it)[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw MalformedFile("coordinates must be numbers");
      out.coords(row, k) = v.get<double>();
    }
    out.ids.push_back(it.key());
  }
  if (j.contains("kappa")) {
    if (!j["kappa"].is_number()) throw MalformedFile("'kappa' must be a number");
    out.kappa = j["kappa"].get<double>();
  }
  return out;
}

void write_trajectory_jsonl(std::ostream& out, const RunRecord& record) {
  for (std::size_t t = 0; t < record.trajectory.size(); ++t) {
    ordered_json line;
    line["iter"] = t;
    line["stress_raw"] = record.trajectory[t].raw;
    line["stress_norm"] = record.trajectory[t].normalized;
    out << line.dump() << '\n';
  }
}

ordered_json graph_to_json(const RoadGraph& g) {
  ordered_json j;
  j["vertices"] = g.vertices();
  ordered_json arcs = ordered_json::array();
  for (const auto& a : g.arcs())
    arcs.push_back({{"from", g.id(a.from)}, {"to", g.id(a.to)}, {"segment", a.segment},
                    {"travel_time_s", a.travel_time}});
  j["arcs"] = std::move(arcs);
  ordered_json entries = ordered_json::array(), exits = ordered_json::array();
  for (auto v : g.entries()) entries.push_back(g.id(v));
  for (auto v : g.exits()) exits.push_back(g.id(v));
  j["entries"] = std::move(entries);
  j["exits"] = std::move(exits);
  return j;
}

} // namespace tdm
