#pragma once

// Independent reference computations used only by tests.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdm/road_graph.hpp"

namespace tdm::oracle {

/// Minimum total time over every simple directed path i -> j, found by
/// depth-first enumeration. +inf where no path exists.
inline Eigen::MatrixXd enumerate_min_times(const RoadGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd best = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  std::vector<bool> on_path(g.size(), false);
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t src, std::size_t v, double t) {
    auto& cell = best(static_cast<Eigen::Index>(src), static_cast<Eigen::Index>(v));
    cell = std::min(cell, t);
    on_path[v] = true;
    for (auto a : g.out_arcs(v)) {
      const auto& arc = g.arcs()[a];
      if (!on_path[arc.to]) walk(src, arc.to, t + arc.travel_time);
    }
    on_path[v] = false;
  };
  for (std::size_t s = 0; s < g.size(); ++s) walk(s, s, 0.0);
  return best;
}

/// All simple directed paths from s to e as vertex sequences with times.
inline std::vector<std::pair<std::vector<std::size_t>, double>> enumerate_paths(const RoadGraph& g, std::size_t s,
                                                                                std::size_t e) {
  std::vector<std::pair<std::vector<std::size_t>, double>> out;
  std::vector<std::size_t> path{s};
  std::vector<bool> on_path(g.size(), false);
  std::function<void(std::size_t, double)> walk = [&](std::size_t v, double t) {
    if (v == e) {
      out.emplace_back(path, t);
      return;
    }
    on_path[v] = true;
    for (auto a : g.out_arcs(v)) {
      const auto& arc = g.arcs()[a];
      if (on_path[arc.to]) continue;
      path.push_back(arc.to);
      walk(arc.to, t + arc.travel_time);
      path.pop_back();
    }
    on_path[v] = false;
  };
  walk(s, 0.0);
  return out;
}

/// Random directed graph with n vertices, each ordered pair an arc with
/// probability p and integer-valued time in [1, 9].
inline RoadGraph random_directed_graph(std::size_t n, double p, std::mt19937_64& gen) {
  std::vector<VertexId> ids;
  for (std::size_t v = 0; v < n; ++v) ids.push_back("n" + std::to_string(v));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> time(1, 9);
  std::vector<Arc> arcs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && coin(gen) < p) arcs.push_back({a, b, double(time(gen)), ids[a] + ids[b]});
  return RoadGraph(std::move(ids), std::move(arcs), {}, {});
}

/// Central finite-difference gradient of f at x, step h per coordinate.
inline Eigen::MatrixXd central_difference(const std::function<double(const Eigen::MatrixXd&)>& f,
                                          const Eigen::MatrixXd& x, double h) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      Eigen::MatrixXd plus = x, minus = x;
      plus(i, k) += h;
      minus(i, k) -= h;
      g(i, k) = (f(plus) - f(minus)) / (2.0 * h);
    }
  return g;
}

/// Euclidean distance matrix of the rows of x.
inline Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  return d;
}

/// Rotation in the (0, 1) plane by theta, extended by identity; optionally
/// followed by a reflection of the first axis.
inline Eigen::MatrixXd orthogonal_map(Eigen::Index dims, double theta, bool reflect) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(dims, dims);
  if (dims >= 2) {
    q(0, 0) = std::cos(theta);
    q(0, 1) = -std::sin(theta);
    q(1, 0) = std::sin(theta);
    q(1, 1) = std::cos(theta);
  }
  if (reflect) q.row(0) *= -1.0;
  return q;
}

} // namespace tdm::oracle
