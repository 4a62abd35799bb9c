#include "tdm/families.hpp"

#include <charconv>
#include <stdexcept>

namespace tdm {

namespace {

class Builder {
public:
  explicit Builder(std::size_t n) {
    for (std::size_t v = 0; v < n; ++v) ids_.push_back("v" + std::to_string(v));
  }
  void edge(std::size_t a, std::size_t b) {
    const std::string seg = ids_[a] + "-" + ids_[b];
    arcs_.push_back({a, b, 1.0, seg});
    arcs_.push_back({b, a, 1.0, seg});
  }
  RoadGraph build() { return RoadGraph(std::move(ids_), std::move(arcs_), {}, {}); }

private:
  std::vector<VertexId> ids_;
  std::vector<Arc> arcs_;
};

std::size_t parse_size(std::string_view s, std::string_view descriptor) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad graph family size in '" + std::string(descriptor) + "'");
  return v;
}

} // namespace

RoadGraph grid_graph(std::size_t rows, std::size_t cols) {
  Builder b(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      if (c + 1 < cols) b.edge(v, v + 1);
      if (r + 1 < rows) b.edge(v, v + cols);
    }
  return b.build();
}

RoadGraph binary_tree_graph(std::size_t depth) {
  const std::size_t n = (std::size_t{1} << (depth + 1)) - 1;
  Builder b(n);
  for (std::size_t v = 1; v < n; ++v) b.edge((v - 1) / 2, v);
  return b.build();
}

RoadGraph cycle_graph(std::size_t n) {
  Builder b(n);
  if (n >= 2)
    for (std::size_t v = 0; v < n; ++v)
      if (n > 2 || v == 0) b.edge(v, (v + 1) % n);
  return b.build();
}

RoadGraph complete_graph(std::size_t n) {
  Builder b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b.edge(i, j);
  return b.build();
}

RoadGraph family_graph(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("graph family must look like name:size, got '" + std::string(descriptor) + "'");
  const auto name = descriptor.substr(0, colon);
  const auto arg = descriptor.substr(colon + 1);
  if (name == "grid") {
    const auto x = arg.find('x');
    if (x == std::string_view::npos) {
      const auto k = parse_size(arg, descriptor);
      return grid_graph(k, k);
    }
    return grid_graph(parse_size(arg.substr(0, x), descriptor), parse_size(arg.substr(x + 1), descriptor));
  }
  if (name == "tree") return binary_tree_graph(parse_size(arg, descriptor));
  if (name == "cycle") return cycle_graph(parse_size(arg, descriptor));
  if (name == "complete") return complete_graph(parse_size(arg, descriptor));
  throw std::invalid_argument("unknown graph family '" + std::string(name) + "'");
}

} // namespace tdm
