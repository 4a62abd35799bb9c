#include "tdm/metric.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include "tdm/detail/format.hpp"

namespace tdm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Label-setting shortest paths from one source; ties pop in vertex order.
void single_source(const RoadGraph& g, std::size_t source, Eigen::Ref<Eigen::VectorXd> dist) {
  dist.setConstant(kInf);
  std::vector<bool> done(g.size(), false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist(static_cast<Eigen::Index>(source)) = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    auto [t, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = true;
    for (auto a : g.out_arcs(v)) {
      const auto& arc = g.arcs()[a];
      const double cand = t + arc.travel_time;
      auto& cur = dist(static_cast<Eigen::Index>(arc.to));
      if (cand < cur) {
        cur = cand;
        queue.push({cand, arc.to});
      }
    }
  }
}

} // namespace

Eigen::MatrixXd all_pairs_times(const RoadGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  // Column-major storage: solve into columns, transpose once at the end.
  Eigen::MatrixXd by_column(n, n);
  for (Eigen::Index s = 0; s < n; ++s) single_source(g, static_cast<std::size_t>(s), by_column.col(s));
  return by_column.transpose();
}

TimeDistanceMatrix symmetrize(const Eigen::MatrixXd& m, Symmetrization policy) {
  if (m.rows() != m.cols()) throw DimensionMismatch("directed matrix must be square");
  const Eigen::Index n = m.rows();
  TimeDistanceMatrix d = TimeDistanceMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) throw std::invalid_argument("directed matrix needs a zero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = m(i, j);
      const double b = m(j, i);
      if (a < 0.0 || b < 0.0 || std::isnan(a) || std::isnan(b))
        throw std::invalid_argument("directed matrix entries must be nonnegative");
      const bool fa = std::isfinite(a);
      const bool fb = std::isfinite(b);
      double v = 0.0;
      if (fa && fb) {
        switch (policy) {
        case Symmetrization::Mean: v = 0.5 * (a + b); break;
        case Symmetrization::Min: v = std::min(a, b); break;
        case Symmetrization::Max: v = std::max(a, b); break;
        }
      } else if (fa) {
        v = a;
      } else if (fb) {
        v = b;
      } else {
        throw DisconnectedPair(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

std::vector<std::vector<std::size_t>> reachability_components(const Eigen::MatrixXd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::isfinite(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) {
        auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    auto r = find(v);
    if (slot[r] == n) {
      slot[r] = groups.size();
      groups.emplace_back();
    }
    groups[slot[r]].push_back(v);
  }
  return groups;
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& ids,
                      const Eigen::MatrixXd& m) {
  if (ids.size() != static_cast<std::size_t>(m.rows()) || m.rows() != m.cols())
    throw DimensionMismatch("matrix and id list disagree");
  for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? "," : "") << ids[k];
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << detail::format_double(m(i, j));
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return kInf;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw MalformedFile("bad matrix cell '" + s + "'");
  return v;
}

} // namespace

LabeledMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedFile("empty matrix file");
  LabeledMatrix out;
  out.ids = split_row(line);
  const auto n = static_cast<Eigen::Index>(out.ids.size());
  out.values.resize(n, n);
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (row >= n) throw MalformedFile("matrix has more rows than ids");
    auto cells = split_row(line);
    if (static_cast<Eigen::Index>(cells.size()) != n)
      throw MalformedFile("matrix row " + std::to_string(row) + " has wrong length");
    for (Eigen::Index j = 0; j < n; ++j) out.values(row, j) = parse_cell(cells[j]);
    ++row;
  }
  if (row != n) throw MalformedFile("matrix has fewer rows than ids");
  return out;
}

} // namespace tdm
