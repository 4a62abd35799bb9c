#include "tdm/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "tdm/errors.hpp"

namespace tdm {

using nlohmann::json;

RoadGraph::RoadGraph(std::vector<VertexId> vertices, std::vector<Arc> arcs,
                     std::vector<std::size_t> entries, std::vector<std::size_t> exits)
    : vertices_(std::move(vertices)),
      arcs_(std::move(arcs)),
      out_(vertices_.size()),
      in_degree_(vertices_.size(), 0),
      entries_(std::move(entries)),
      exits_(std::move(exits)) {
  for (std::size_t v = 0; v < vertices_.size(); ++v) index_.emplace(vertices_[v], v);
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    out_.at(arcs_[a].from).push_back(a);
    ++in_degree_.at(arcs_[a].to);
  }
}

std::optional<std::size_t> RoadGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw MalformedFile(std::string("segment field '") + key + "' must be a string");
  return it->get<std::string>();
}

double number_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw MalformedFile(std::string("segment field '") + key + "' must be a number");
  return it->get<double>();
}

std::vector<VertexId> id_list(const json& root, const char* key) {
  std::vector<VertexId> out;
  auto it = root.find(key);
  if (it == root.end()) return out;
  if (!it->is_array()) throw MalformedFile(std::string("'") + key + "' must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) throw MalformedFile(std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void validate(const RoadNetwork& net) {
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> endpoints;
  for (const auto& s : net.segments) {
    if (!ids.insert(s.id).second) throw InvalidSegment("duplicate segment id '" + s.id + "'");
    if (!(s.length_m > 0.0) || !std::isfinite(s.length_m))
      throw InvalidSegment("segment '" + s.id + "' has non-positive length");
    if (!(s.speed_limit_mps > 0.0) || !std::isfinite(s.speed_limit_mps))
      throw InvalidSegment("segment '" + s.id + "' has non-positive speed limit");
    if (s.from == s.to) throw InvalidSegment("segment '" + s.id + "' is a self-loop");
    endpoints.insert(s.from);
    endpoints.insert(s.to);
  }
  for (const auto& e : net.entries)
    if (!endpoints.contains(e)) throw InvalidSegment("entry '" + e + "' is not a segment endpoint");
  for (const auto& x : net.exits)
    if (!endpoints.contains(x)) throw InvalidSegment("exit '" + x + "' is not a segment endpoint");
}

std::vector<std::size_t> unique_indices(const std::vector<std::size_t>& in) {
  std::vector<std::size_t> out;
  for (auto v : in)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

RoadGraph build_endpoint_graph(const RoadNetwork& net) {
  std::vector<VertexId> vertices;
  std::unordered_map<VertexId, std::size_t> index;
  auto intern = [&](const VertexId& id) {
    auto [it, inserted] = index.emplace(id, vertices.size());
    if (inserted) vertices.push_back(id);
    return it->second;
  };
  std::vector<Arc> arcs;
  for (const auto& s : net.segments) {
    const auto a = intern(s.from);
    const auto b = intern(s.to);
    arcs.push_back({a, b, s.travel_time(), s.id});
    if (s.bidirectional) arcs.push_back({b, a, s.travel_time(), s.id});
  }
  std::vector<std::size_t> entries, exits;
  for (const auto& e : net.entries) entries.push_back(index.at(e));
  for (const auto& x : net.exits) exits.push_back(index.at(x));

  RoadGraph g(std::move(vertices), std::move(arcs), unique_indices(entries), unique_indices(exits));
  for (auto v : g.entries())
    if (g.out_arcs(v).empty())
      throw DegreeViolation(g.id(v), "entry '" + g.id(v) + "' has no outgoing arc");
  for (auto v : g.exits())
    if (g.in_degree(v) == 0)
      throw DegreeViolation(g.id(v), "exit '" + g.id(v) + "' has no incoming arc");
  return g;
}

// Block ingestion: arc s -> t when traffic leaving s can continue onto t.
RoadGraph build_block_graph(const RoadNetwork& net) {
  const auto& segs = net.segments;
  auto leaves_at = [](const RoadSegment& s, const VertexId& v) {
    return s.to == v || (s.bidirectional && s.from == v);
  };
  auto enters_at = [](const RoadSegment& s, const VertexId& v) {
    return s.from == v || (s.bidirectional && s.to == v);
  };

  std::vector<VertexId> vertices;
  for (const auto& s : segs) vertices.push_back(s.id);

  std::vector<Arc> arcs;
  for (std::size_t a = 0; a < segs.size(); ++a) {
    for (std::size_t b = 0; b < segs.size(); ++b) {
      if (a == b) continue;
      const auto& s = segs[a];
      const auto& t = segs[b];
      const bool joined = enters_at(t, s.to) || (s.bidirectional && enters_at(t, s.from));
      if (joined)
        arcs.push_back({a, b, 0.5 * (s.travel_time() + t.travel_time()), s.id + ">" + t.id});
    }
  }

  std::vector<std::size_t> entries, exits;
  for (const auto& e : net.entries)
    for (std::size_t a = 0; a < segs.size(); ++a)
      if (enters_at(segs[a], e)) entries.push_back(a);
  for (const auto& x : net.exits)
    for (std::size_t a = 0; a < segs.size(); ++a)
      if (leaves_at(segs[a], x)) exits.push_back(a);
  entries = unique_indices(entries);
  exits = unique_indices(exits);
  auto contains = [](const std::vector<std::size_t>& v, std::size_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };

  RoadGraph g(std::move(vertices), std::move(arcs), entries, exits);
  // A block that is both entry and exit can be traversed on its own.
  for (auto v : g.entries())
    if (g.out_arcs(v).empty() && !contains(exits, v))
      throw DegreeViolation(g.id(v), "entry block '" + g.id(v) + "' has no outgoing arc");
  for (auto v : g.exits())
    if (g.in_degree(v) == 0 && !contains(entries, v))
      throw DegreeViolation(g.id(v), "exit block '" + g.id(v) + "' has no incoming arc");
  return g;
}

} // namespace

RoadNetwork parse_network(std::string_view content) {
  json root;
  try {
    root = json::parse(content.begin(), content.end());
  } catch (const json::parse_error& e) {
    throw MalformedFile(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw MalformedFile("network file must be a JSON object");
  auto segs = root.find("segments");
  if (segs == root.end() || !segs->is_array())
    throw MalformedFile("network file needs a 'segments' array");

  RoadNetwork net;
  for (const auto& s : *segs) {
    if (!s.is_object()) throw MalformedFile("segment entries must be objects");
    RoadSegment seg;
    seg.id = string_field(s, "id");
    seg.from = string_field(s, "from");
    seg.to = string_field(s, "to");
    seg.length_m = number_field(s, "length_m");
    seg.speed_limit_mps = number_field(s, "speed_limit_mps");
    if (auto it = s.find("bidirectional"); it != s.end()) {
      if (!it->is_boolean()) throw MalformedFile("segment field 'bidirectional' must be a boolean");
      seg.bidirectional = it->get<bool>();
    }
    net.segments.push_back(std::move(seg));
  }
  net.entries = id_list(root, "entries");
  net.exits = id_list(root, "exits");
  validate(net);
  return net;
}

RoadNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

RoadGraph build_graph(const RoadNetwork& net, IngestMode mode) {
  return mode == IngestMode::Endpoint ? build_endpoint_graph(net) : build_block_graph(net);
}

namespace {

struct Label {
  double time;
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> arcs;
};

bool id_sequence_less(const RoadGraph& g, const std::vector<std::size_t>& a,
                      const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [&](std::size_t x, std::size_t y) { return g.id(x) < g.id(y); });
}

bool label_less(const RoadGraph& g, const Label& a, const Label& b) {
  if (a.time != b.time) return a.time < b.time;
  return id_sequence_less(g, a.vertices, b.vertices);
}

} // namespace

RoadPath path_between(const RoadGraph& g, std::size_t start, std::size_t end) {
  if (start >= g.size() || end >= g.size()) throw IndexOutOfRange("vertex index out of range");

  std::vector<std::optional<Label>> best(g.size());
  std::vector<bool> settled(g.size(), false);
  auto cmp = [&](const std::pair<std::size_t, Label>& a, const std::pair<std::size_t, Label>& b) {
    return label_less(g, b.second, a.second);
  };
  std::priority_queue<std::pair<std::size_t, Label>, std::vector<std::pair<std::size_t, Label>>,
                      decltype(cmp)>
      queue(cmp);

  best[start] = Label{0.0, {start}, {}};
  queue.push({start, *best[start]});
  while (!queue.empty()) {
    auto [v, label] = queue.top();
    queue.pop();
    if (settled[v]) continue;
    settled[v] = true;
    if (v == end) return RoadPath{label.vertices, label.arcs, label.time};
    for (auto a : g.out_arcs(v)) {
      const auto& arc = g.arcs()[a];
      if (settled[arc.to]) continue;
      Label next{label.time + arc.travel_time, label.vertices, label.arcs};
      next.vertices.push_back(arc.to);
      next.arcs.push_back(a);
      if (!best[arc.to] || label_less(g, next, *best[arc.to])) {
        best[arc.to] = next;
        queue.push({arc.to, std::move(next)});
      }
    }
  }
  throw NoPath("no directed path from '" + g.id(start) + "' to '" + g.id(end) + "'");
}

RoadPath path_between(const RoadGraph& g, std::string_view start, std::string_view end) {
  auto s = g.index_of(start);
  auto e = g.index_of(end);
  if (!s || !e) throw IndexOutOfRange("unknown vertex id");
  return path_between(g, *s, *e);
}

} // namespace tdm
