#pragma once

// Vertex- and graph-level topological metrics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "creditnet/bipartite.hpp"
#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"
#include "creditnet/graph.hpp"

namespace creditnet {

struct VertexMetrics {
  VertexKey key;
  std::size_t degree = 0;
  double strength = 0.0;
  double relative_strength = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
  bool closeness_isolated = false;
  double local_clustering = 0.0;  // within the vertex's own one-mode projection
};

struct GraphMetrics {
  double global_clustering = 0.0;
  std::optional<double> assortativity;  // nullopt when degree-regular or edgeless
  std::size_t edge_count = 0;
  std::size_t vertex_count = 0;
};

// Degree, strength and relative strength for every vertex of `net`, indexed
// by unified vertex number (institutions first).
//
// Relative strength is the sum of dependence shares: for institution i,
// sum over its borrowers j of w(i,j) / C_Fj; for firm j, sum over its lenders
// i of w(i,j) / C_Bi.
inline std::vector<VertexMetrics> vertex_metrics(const BipartiteCreditNetwork& net) {
  std::vector<VertexMetrics> out(net.vertex_count());
  for (std::size_t i = 0; i < net.institution_count(); ++i) {
    auto& m = out[net.vertex(Side::Institution, i)];
    m.key = {Side::Institution, net.institutions()[i].id};
    for (const auto& l : net.lending(i)) {
      ++m.degree;
      m.strength += l.weight;
      m.relative_strength += l.weight / net.borrowing_total(l.other);
    }
  }
  for (std::size_t f = 0; f < net.firm_count(); ++f) {
    auto& m = out[net.vertex(Side::Firm, f)];
    m.key = {Side::Firm, net.firms()[f].id};
    for (const auto& l : net.borrowing(f)) {
      ++m.degree;
      m.strength += l.weight;
      m.relative_strength += l.weight / net.lending_total(l.other);
    }
  }
  return out;
}

// Sample Pearson correlation.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("pearson: length mismatch");
  if (xs.size() < 2) throw InvalidArgument("pearson: need at least two observations");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw UndefinedError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct Clustering {
  std::vector<double> local;  // per vertex slot; 0 for removed vertices
  double global = 0.0;        // mean of local over live vertices
};

// Local clustering: edges among neighbors over d(d-1)/2, and 0 when d <= 1.
// Triangles are counted once each via degree-ordered orientation.
inline Clustering clustering(const Graph& g) {
  const std::size_t n = g.capacity();
  std::vector<std::size_t> rank(n);
  {
    std::vector<Vertex> order;
    for (Vertex v = 0; v < n; ++v) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
    });
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;
  }
  std::vector<std::vector<Vertex>> out(n);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v : g.neighbors(u)) {
      if (rank[u] < rank[v]) out[u].push_back(v);
    }
  }
  std::vector<std::uint64_t> tri(n, 0);
  std::vector<std::uint8_t> mark(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v : out[u]) mark[v] = 1;
    for (Vertex v : out[u]) {
      for (Vertex w : out[v]) {
        if (mark[w]) {
          ++tri[u];
          ++tri[v];
          ++tri[w];
        }
      }
    }
    for (Vertex v : out[u]) mark[v] = 0;
  }
  Clustering c;
  c.local.assign(n, 0.0);
  double sum = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (!g.contains(v)) continue;
    const double d = static_cast<double>(g.degree(v));
    if (d > 1) c.local[v] = static_cast<double>(tri[v]) / (d * (d - 1) / 2);
    sum += c.local[v];
  }
  c.global = g.vertex_count() ? sum / static_cast<double>(g.vertex_count()) : 0.0;
  return c;
}

// Degree assortativity over edges, each undirected edge counted once with
// the symmetric half terms. Returns nullopt when all edge endpoints share one
// degree (zero denominator). Sums are kept in exact integer arithmetic.
inline std::optional<double> assortativity(const Graph& g) {
  if (g.edge_count() == 0) throw InvalidArgument("assortativity: graph has no edges");
  // Scaled by 4|D|^2 to stay integral:
  //   num = 4|D| sum k_i k_j - (sum (k_i + k_j))^2
  //   den = 2|D| sum (k_i^2 + k_j^2) - (sum (k_i + k_j))^2
  long double prod = 0, ksum = 0, sqsum = 0;
  for (auto [u, v] : g.edges()) {
    const long double ku = static_cast<long double>(g.degree(u));
    const long double kv = static_cast<long double>(g.degree(v));
    prod += ku * kv;
    ksum += ku + kv;
    sqsum += ku * ku + kv * kv;
  }
  const long double m = static_cast<long double>(g.edge_count());
  const long double num = 4 * m * prod - ksum * ksum;
  const long double den = 2 * m * sqsum - ksum * ksum;
  if (den == 0) return std::nullopt;
  return std::clamp(static_cast<double>(num / den), -1.0, 1.0);
}

namespace detail {

// Brandes dependency accumulation. Calls on_edge(v, w, credit) for every
// shortest-path DAG edge v -> w and returns nothing; vertex dependencies are
// added into `vertex_score` when non-null.
template <typename T, typename OnEdge>
void brandes(const Graph& g, std::vector<T>* vertex_score, OnEdge&& on_edge) {
  const std::size_t n = g.capacity();
  std::vector<T> delta(n);
  for (Vertex s = 0; s < n; ++s) {
    if (!g.contains(s)) continue;
    const auto row = shortest_paths(g, s);
    for (Vertex v : row.order) delta[v] = T(0);
    for (auto it = row.order.rbegin(); it != row.order.rend(); ++it) {
      const Vertex w = *it;
      for (Vertex v : g.neighbors(w)) {
        if (row.distance[v] + 1 == row.distance[w]) {
          const T c = T(row.sigma[v]) / T(row.sigma[w]) * (T(1) + delta[w]);
          delta[v] += c;
          on_edge(v, w, c);
        }
      }
      if (w != s && vertex_score) (*vertex_score)[w] += delta[w];
    }
  }
}

}  // namespace detail

// Unnormalized shortest-path betweenness: unordered pairs counted once,
// endpoints excluded, unreachable pairs contribute nothing. T may be an
// exact rational type.
template <typename T = double>
std::vector<T> betweenness(const Graph& g) {
  std::vector<T> score(g.capacity(), T(0));
  detail::brandes(g, &score, [](Vertex, Vertex, const T&) {});
  for (auto& s : score) s /= 2;
  return score;
}

// Edge betweenness aligned with g.edges().
inline std::vector<double> edge_betweenness(const Graph& g) {
  const auto edges = g.edges();
  std::vector<std::size_t> offset(g.capacity() + 1, 0);
  for (auto [u, v] : edges) ++offset[u + 1];
  for (std::size_t i = 1; i < offset.size(); ++i) offset[i] += offset[i - 1];
  auto index_of = [&](Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    auto first = edges.begin() + static_cast<std::ptrdiff_t>(offset[a]);
    auto last = edges.begin() + static_cast<std::ptrdiff_t>(offset[a + 1]);
    return static_cast<std::size_t>(std::lower_bound(first, last, Edge{a, b}) - edges.begin());
  };
  std::vector<double> score(edges.size(), 0.0);
  detail::brandes<double>(g, nullptr, [&](Vertex v, Vertex w, double c) { score[index_of(v, w)] += c; });
  for (auto& s : score) s /= 2.0;
  return score;
}

struct Closeness {
  std::vector<double> value;
  std::vector<bool> isolated;  // true when the distance sum is zero
};

// N / sum_j d_ij with unreachable pairs contributing 0; N counts live
// vertices. A zero distance sum yields 0 with the isolated flag set.
inline Closeness closeness(const Graph& g) {
  Closeness c;
  c.value.assign(g.capacity(), 0.0);
  c.isolated.assign(g.capacity(), false);
  const double n = static_cast<double>(g.vertex_count());
  for (Vertex s = 0; s < g.capacity(); ++s) {
    if (!g.contains(s)) continue;
    const auto row = shortest_paths(g, s);
    double sum = 0;
    for (Vertex v : row.order) sum += static_cast<double>(row.distance[v]);
    if (sum == 0) {
      c.isolated[s] = true;
    } else {
      c.value[s] = n / sum;
    }
  }
  return c;
}

// Bias-adjusted sample skewness G1 = g1 * sqrt(n(n-1)) / (n-2).
inline double skewness(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw InvalidArgument("skewness: need at least three values");
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0, m3 = 0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (m2 == 0) throw UndefinedError("skewness: zero variance");
  const double g1 = m3 / std::pow(m2, 1.5);
  const double nn = static_cast<double>(n);
  return g1 * std::sqrt(nn * (nn - 1)) / (nn - 2);
}

inline GraphMetrics graph_metrics(const Graph& g) {
  GraphMetrics m;
  m.global_clustering = clustering(g).global;
  m.assortativity = g.edge_count() ? assortativity(g) : std::nullopt;
  m.edge_count = g.edge_count();
  m.vertex_count = g.vertex_count();
  return m;
}

// Every VertexMetrics field: degree/strength/relative strength from the
// weighted network, betweenness and closeness on the two-mode graph, local
// clustering within the vertex's own projection.
inline std::vector<VertexMetrics> full_vertex_metrics(const BipartiteCreditNetwork& net) {
  auto out = vertex_metrics(net);
  const Graph g = net.graph();
  const auto btw = betweenness(g);
  const auto clo = closeness(g);
  const auto cc_b = clustering(project_institutions(net).graph);
  const auto cc_f = clustering(project_firms(net).graph);
  for (Vertex v = 0; v < out.size(); ++v) {
    out[v].betweenness = btw[v];
    out[v].closeness = clo.value[v];
    out[v].closeness_isolated = clo.isolated[v];
    auto [side, i] = net.locate(v);
    out[v].local_clustering = side == Side::Institution ? cc_b.local[i] : cc_f.local[i];
  }
  return out;
}

enum class Aggregation { Mean, Sum };

// Aggregates `values` by `labels` (parallel sequences).
inline std::map<std::string, double> aggregate_by_label(std::span<const double> values,
                                                        std::span<const std::string> labels,
                                                        Aggregation how) {
  if (values.size() != labels.size()) throw InvalidArgument("aggregate_by_label: length mismatch");
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& [sum, count] = acc[labels[i]];
    sum += values[i];
    ++count;
  }
  std::map<std::string, double> out;
  for (const auto& [label, sc] : acc) {
    out[label] = how == Aggregation::Mean ? sc.first / static_cast<double>(sc.second) : sc.first;
  }
  return out;
}

inline const std::vector<std::string>& vertex_metrics_csv_header() {
  static const std::vector<std::string> h = {"period",      "side",      "vertex",
                                             "degree",      "strength",  "relative_strength",
                                             "betweenness", "closeness", "closeness_isolated",
                                             "local_clustering"};
  return h;
}

inline void write_vertex_metrics_rows(csv::Writer& w, int period, std::span<const VertexMetrics> rows) {
  for (const auto& m : rows) {
    w.row({std::to_string(period), std::string(side_name(m.key.side)), m.key.id, std::to_string(m.degree),
           csv::format_double(m.strength), csv::format_double(m.relative_strength),
           csv::format_double(m.betweenness), csv::format_double(m.closeness),
           m.closeness_isolated ? "true" : "false", csv::format_double(m.local_clustering)});
  }
}

}  // namespace creditnet
