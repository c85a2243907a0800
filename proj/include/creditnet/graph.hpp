#pragma once

// Undirected simple graph over dense vertex indices, with vertex removal,
// connected components and breadth-first shortest paths. Both the bipartite
// network and its one-mode projections are viewed through this type.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "creditnet/error.hpp"

namespace creditnet {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n) : adj_(n), present_(n, 1), live_(n) {}

  // Self-loops are rejected; duplicate edges collapse.
  Graph(std::size_t n, std::span<const Edge> edges) : Graph(n) {
    for (auto [u, v] : edges) {
      check_index(u);
      check_index(v);
      if (u == v) throw InvalidArgument("self-loop on vertex " + std::to_string(u));
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& nbrs : adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      edges_ += nbrs.size();
    }
    edges_ /= 2;
  }

  // Marks the graph as two-mode: vertices [0, first_side_size) form one
  // class and the rest the other. Only affects density conventions.
  void set_bipartition(std::size_t first_side_size) {
    if (first_side_size > adj_.size()) throw InvalidArgument("bipartition larger than graph");
    first_side_ = first_side_size;
  }
  bool bipartite() const noexcept { return first_side_.has_value(); }
  bool in_first_side(Vertex v) const noexcept { return first_side_ && v < *first_side_; }

  // Number of vertex slots, including removed ones.
  std::size_t capacity() const noexcept { return adj_.size(); }
  std::size_t vertex_count() const noexcept { return live_; }
  std::size_t edge_count() const noexcept { return edges_; }
  bool contains(Vertex v) const noexcept { return v < adj_.size() && present_[v]; }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& n = adj_.at(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  // Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edges_);
    for (Vertex u = 0; u < adj_.size(); ++u) {
      for (Vertex v : adj_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  // Removes v together with its incident edges. The index stays reserved.
  void remove_vertex(Vertex v) {
    if (!contains(v)) throw InvalidArgument("vertex " + std::to_string(v) + " not in graph");
    for (Vertex u : adj_[v]) {
      auto& n = adj_[u];
      n.erase(std::lower_bound(n.begin(), n.end(), v));
    }
    edges_ -= adj_[v].size();
    adj_[v].clear();
    present_[v] = 0;
    --live_;
  }

  void remove_edge(Vertex u, Vertex v) {
    auto& nu = adj_.at(u);
    auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it == nu.end() || *it != v) throw InvalidArgument("edge not in graph");
    nu.erase(it);
    auto& nv = adj_.at(v);
    nv.erase(std::lower_bound(nv.begin(), nv.end(), u));
    --edges_;
  }

  // Counts of live vertices on each side of a bipartition.
  std::pair<std::size_t, std::size_t> side_counts() const {
    std::size_t first = 0;
    for (Vertex v = 0; v < adj_.size(); ++v) {
      if (present_[v] && in_first_side(v)) ++first;
    }
    return {first, live_ - first};
  }

 private:
  void check_index(Vertex v) const {
    if (v >= adj_.size()) throw InvalidArgument("vertex index " + std::to_string(v) + " out of range");
  }

  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::uint8_t> present_;
  std::size_t live_ = 0;
  std::size_t edges_ = 0;
  std::optional<std::size_t> first_side_;
};

struct Components {
  // Component index per vertex slot; -1 for removed vertices. Components are
  // numbered in increasing order of their smallest vertex.
  std::vector<long> label;
  std::vector<std::vector<Vertex>> members;  // each sorted ascending

  std::size_t count() const noexcept { return members.size(); }
  std::size_t largest_size() const noexcept {
    std::size_t best = 0;
    for (const auto& m : members) best = std::max(best, m.size());
    return best;
  }
};

inline Components connected_components(const Graph& g) {
  Components c;
  c.label.assign(g.capacity(), -1);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.capacity(); ++s) {
    if (!g.contains(s) || c.label[s] != -1) continue;
    const long id = static_cast<long>(c.members.size());
    auto& members = c.members.emplace_back();
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (Vertex v : g.neighbors(u)) {
        if (c.label[v] == -1) {
          c.label[v] = id;
          stack.push_back(v);
        }
      }
    }
    std::sort(members.begin(), members.end());
  }
  return c;
}

// One row of the distance matrix: hop distances and shortest-path counts
// from a single source. Unreachable entries hold kUnreachable and sigma 0.
struct ShortestPathRow {
  Vertex source = 0;
  std::vector<std::size_t> distance;
  std::vector<double> sigma;
  std::vector<Vertex> order;  // vertices in non-decreasing distance, source first
};

inline ShortestPathRow shortest_paths(const Graph& g, Vertex source) {
  if (!g.contains(source)) throw InvalidArgument("unknown source vertex " + std::to_string(source));
  ShortestPathRow row;
  row.source = source;
  row.distance.assign(g.capacity(), kUnreachable);
  row.sigma.assign(g.capacity(), 0.0);
  row.distance[source] = 0;
  row.sigma[source] = 1.0;
  std::queue<Vertex> q;
  q.push(source);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    row.order.push_back(u);
    for (Vertex v : g.neighbors(u)) {
      if (row.distance[v] == kUnreachable) {
        row.distance[v] = row.distance[u] + 1;
        q.push(v);
      }
      if (row.distance[v] == row.distance[u] + 1) row.sigma[v] += row.sigma[u];
    }
  }
  return row;
}

struct DistanceMatrix {
  std::vector<std::vector<std::size_t>> d;
  std::vector<std::vector<double>> sigma;
  // Consumers decide how kUnreachable is surfaced (closeness maps it to 0,
  // average path length skips the pair).
  static constexpr std::size_t unreachable = kUnreachable;
};

inline DistanceMatrix distance_matrix(const Graph& g) {
  DistanceMatrix m;
  m.d.resize(g.capacity());
  m.sigma.resize(g.capacity());
  for (Vertex s = 0; s < g.capacity(); ++s) {
    if (!g.contains(s)) continue;
    auto row = shortest_paths(g, s);
    m.d[s] = std::move(row.distance);
    m.sigma[s] = std::move(row.sigma);
  }
  return m;
}

}  // namespace creditnet
