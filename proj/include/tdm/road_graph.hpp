#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tdm {

using VertexId = std::string;

/// A directed or two-way road piece with its speed-limit proxy data.
struct RoadSegment {
  std::string id;
  VertexId from;
  VertexId to;
  double length_m = 0.0;
  double speed_limit_mps = 0.0;
  bool bidirectional = false;

  /// Free-flow traversal time in seconds.
  double travel_time() const { return length_m / speed_limit_mps; }
};

struct RoadNetwork {
  std::vector<RoadSegment> segments;
  std::vector<VertexId> entries;
  std::vector<VertexId> exits;
};

/// How segments are turned into graph vertices.
enum class IngestMode {
  /// Vertices are segment endpoints, each segment becomes one or two arcs.
  Endpoint,
  /// Vertices are the segments themselves; consecutive segments are joined by
  /// an arc whose time runs from the middle of one to the middle of the next.
  Block,
};

struct Arc {
  std::size_t from;
  std::size_t to;
  double travel_time;
  std::string segment;
};

/// Directed road graph with entry and exit vertex sets.
///
/// Immutable after build_graph; vertex indices follow first appearance.
class RoadGraph {
public:
  RoadGraph(std::vector<VertexId> vertices, std::vector<Arc> arcs,
            std::vector<std::size_t> entries, std::vector<std::size_t> exits);

  std::size_t size() const { return vertices_.size(); }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  const VertexId& id(std::size_t v) const { return vertices_.at(v); }
  std::optional<std::size_t> index_of(std::string_view id) const;

  const std::vector<Arc>& arcs() const { return arcs_; }
  /// Indices into arcs() leaving vertex v, in insertion order.
  const std::vector<std::size_t>& out_arcs(std::size_t v) const { return out_.at(v); }
  std::size_t in_degree(std::size_t v) const { return in_degree_.at(v); }

  const std::vector<std::size_t>& entries() const { return entries_; }
  const std::vector<std::size_t>& exits() const { return exits_; }

private:
  std::vector<VertexId> vertices_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::size_t> in_degree_;
  std::vector<std::size_t> entries_;
  std::vector<std::size_t> exits_;
};

struct RoadPath {
  std::vector<std::size_t> vertices;
  /// Indices into RoadGraph::arcs().
  std::vector<std::size_t> arcs;
  double total_time = 0.0;
};

/// Parses the JSON network format. Throws MalformedFile or InvalidSegment.
RoadNetwork parse_network(std::string_view content);
RoadNetwork load_network(const std::filesystem::path& path);

/// Throws DegreeViolation when an entry has no outgoing arc or an exit has no
/// incoming one.
RoadGraph build_graph(const RoadNetwork& net, IngestMode mode = IngestMode::Endpoint);

/// Minimum-time directed path; equal times are broken by the lexicographically
/// smallest vertex-id sequence. Throws NoPath.
RoadPath path_between(const RoadGraph& g, std::size_t start, std::size_t end);
RoadPath path_between(const RoadGraph& g, std::string_view start, std::string_view end);

} // namespace tdm
