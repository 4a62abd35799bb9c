#include "tdm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tdm/detail/format.hpp"
#include "tdm/errors.hpp"

namespace tdm {

namespace {

using detail::format_fixed;

constexpr double kCanvas = 800.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

struct Viewport {
  double min_x, max_y, scale, width, height;

  double px(double x) const { return (x - min_x) * scale; }
  double py(double y) const { return (max_y - y) * scale; }
};

Viewport fit(double lo_x, double hi_x, double lo_y, double hi_y) {
  double wx = hi_x - lo_x, wy = hi_y - lo_y;
  if (!(wx > 0.0) && !(wy > 0.0)) wx = wy = 1.0;
  // Keep degenerate (collinear) layouts visible.
  if (wx < 0.25 * wy) {
    lo_x -= 0.5 * (0.25 * wy - wx);
    wx = 0.25 * wy;
  }
  if (wy < 0.25 * wx) {
    lo_y -= 0.5 * (0.25 * wx - wy);
    wy = 0.25 * wx;
  }
  const double mx = 0.05 * wx, my = 0.05 * wy;
  Viewport v;
  v.min_x = lo_x - mx;
  v.max_y = lo_y + wy + my;
  v.scale = kCanvas / (wx + 2 * mx);
  v.width = kCanvas;
  v.height = (wy + 2 * my) * v.scale;
  return v;
}

double coord(const Layout& x, Eigen::Index i, Eigen::Index k) { return k < x.cols() ? x(i, k) : 0.0; }

std::string draw(const LabeledLayout& layout, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  const Layout& x = layout.coords;
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  bool first = true;
  auto include = [&](double px, double py) {
    if (first) {
      lo_x = hi_x = px;
      lo_y = hi_y = py;
      first = false;
      return;
    }
    lo_x = std::min(lo_x, px), hi_x = std::max(hi_x, px);
    lo_y = std::min(lo_y, py), hi_y = std::max(hi_y, py);
  };
  for (Eigen::Index i = 0; i < x.rows(); ++i) include(coord(x, i, 0), coord(x, i, 1));
  const bool disk = layout.kappa && *layout.kappa < 0.0;
  const double radius = disk ? 1.0 / std::sqrt(-*layout.kappa) : 0.0;
  if (disk) {
    include(-radius, -radius);
    include(radius, radius);
  }
  const Viewport v = fit(lo_x, hi_x, lo_y, hi_y);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(v.width, 1) << "\" height=\""
      << format_fixed(v.height, 1) << "\" viewBox=\"0 0 " << format_fixed(v.width, 1) << ' '
      << format_fixed(v.height, 1) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (disk)
    svg << "<circle class=\"domain\" cx=\"" << format_fixed(v.px(0)) << "\" cy=\"" << format_fixed(v.py(0))
        << "\" r=\"" << format_fixed(radius * v.scale) << "\" fill=\"none\" stroke=\"#888888\"/>\n";
  for (auto [a, b] : edges) {
    const auto i = static_cast<Eigen::Index>(a), j = static_cast<Eigen::Index>(b);
    svg << "<line class=\"edge\" x1=\"" << format_fixed(v.px(coord(x, i, 0))) << "\" y1=\""
        << format_fixed(v.py(coord(x, i, 1))) << "\" x2=\"" << format_fixed(v.px(coord(x, j, 0)))
        << "\" y2=\"" << format_fixed(v.py(coord(x, j, 1))) << "\" stroke=\"#4477aa\"/>\n";
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double cx = v.px(coord(x, i, 0)), cy = v.py(coord(x, i, 1));
    svg << "<circle class=\"node\" cx=\"" << format_fixed(cx) << "\" cy=\"" << format_fixed(cy)
        << "\" r=\"6\" fill=\"#ee6677\"/>\n";
    svg << "<text x=\"" << format_fixed(cx + 8) << "\" y=\"" << format_fixed(cy - 8)
        << "\" font-size=\"12\">" << escape(layout.ids[static_cast<std::size_t>(i)]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace

std::string render_svg(const LabeledLayout& layout) { return draw(layout, {}); }

std::string render_svg(const LabeledLayout& layout, const RoadGraph& graph) {
  if (layout.ids.size() != graph.size())
    throw IdMismatch("layout has " + std::to_string(layout.ids.size()) + " vertices, graph has " +
                     std::to_string(graph.size()));
  std::unordered_map<std::string, std::size_t> row;
  for (std::size_t i = 0; i < layout.ids.size(); ++i) row.emplace(layout.ids[i], i);
  for (const auto& id : graph.vertices())
    if (!row.contains(id)) throw IdMismatch("graph vertex '" + id + "' missing from the layout");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& arc : graph.arcs()) {
    auto a = row.at(graph.id(arc.from)), b = row.at(graph.id(arc.to));
    if (a > b) std::swap(a, b);
    if (seen.insert({a, b}).second) edges.emplace_back(a, b);
  }
  return draw(layout, edges);
}

std::string render_trajectory_plot(const std::vector<PlotSeries>& series, const std::string& title) {
  static const char* palette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377"};
  constexpr double width = 800, height = 500, left = 70, right = 20, top = 40, bottom = 50;
  constexpr double floor_value = 1e-16;

  std::size_t max_len = 1;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : series) {
    max_len = std::max(max_len, s.values.size());
    for (double v : s.values) {
      const double l = std::log10(std::max(v, floor_value));
      lo = std::min(lo, l), hi = std::max(hi, l);
    }
  }
  if (!std::isfinite(lo)) lo = -1, hi = 0;
  lo = std::floor(lo), hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1;

  auto px = [&](std::size_t t) {
    return left + (width - left - right) * (max_len > 1 ? double(t) / double(max_len - 1) : 0.0);
  };
  auto py = [&](double v) {
    const double l = std::log10(std::max(v, floor_value));
    return top + (height - top - bottom) * (hi - l) / (hi - lo);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title) << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); ++e) {
    const double y = py(std::pow(10.0, e));
    svg << "<text x=\"" << left - 6 << "\" y=\"" << format_fixed(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">1e"
        << e << "</text>\n";
  }
  svg << "<text x=\"400\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">iteration</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& values = series[s].values;
    if (values.empty()) continue;
    svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << palette[s % 6] << "\" points=\"";
    for (std::size_t t = 0; t < values.size(); ++t)
      svg << (t ? " " : "") << format_fixed(px(t), 2) << ',' << format_fixed(py(values[t]), 2);
    svg << "\"><title>" << escape(series[s].label) << "</title></polyline>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace tdm
