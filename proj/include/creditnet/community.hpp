#pragma once

// Modularity and community detection on the two-mode credit network.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "creditnet/bipartite.hpp"
#include "creditnet/error.hpp"
#include "creditnet/graph.hpp"
#include "creditnet/topology.hpp"

namespace creditnet {

// Community id per vertex. Ids are canonical: numbered 0, 1, ... in order of
// each community's smallest vertex.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::size_t> assignment) : assignment_(std::move(assignment)) { canonicalize(); }

  static Partition single(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0)); }
  static Partition from_components(const Components& c) {
    std::vector<std::size_t> a(c.label.size());
    for (std::size_t v = 0; v < a.size(); ++v) a[v] = static_cast<std::size_t>(c.label[v]);
    return Partition(std::move(a));
  }

  std::size_t size() const noexcept { return assignment_.size(); }
  std::size_t community_count() const noexcept { return count_; }
  std::size_t operator[](Vertex v) const { return assignment_.at(v); }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
  bool same(Vertex u, Vertex v) const { return assignment_.at(u) == assignment_.at(v); }

  std::vector<std::vector<Vertex>> members() const {
    std::vector<std::vector<Vertex>> m(count_);
    for (Vertex v = 0; v < assignment_.size(); ++v) m[assignment_[v]].push_back(v);
    return m;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  void canonicalize() {
    std::map<std::size_t, std::size_t> remap;
    for (auto& c : assignment_) {
      auto [it, inserted] = remap.try_emplace(c, remap.size());
      c = it->second;
    }
    count_ = remap.size();
  }

  std::vector<std::size_t> assignment_;
  std::size_t count_ = 0;
};

// Q = (1/2M) sum_ij [a_ij - k_i k_j / 2M] delta(c_i, c_j) over ordered
// pairs, evaluated per community as sum_c [L_c / M - (D_c / 2M)^2].
inline double modularity(const Graph& g, const Partition& p) {
  if (p.size() != g.capacity()) throw InvalidArgument("partition does not cover the graph");
  if (g.edge_count() == 0) throw UndefinedError("modularity undefined for a graph without edges");
  std::vector<double> internal(p.community_count(), 0.0), degree(p.community_count(), 0.0);
  for (auto [u, v] : g.edges()) {
    if (p.same(u, v)) internal[p[u]] += 1.0;
  }
  for (Vertex v = 0; v < g.capacity(); ++v) degree[p[v]] += static_cast<double>(g.degree(v));
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t c = 0; c < p.community_count(); ++c) {
    const double share = degree[c] / (2 * m);
    q += internal[c] / m - share * share;
  }
  return q;
}

inline double modularity(const BipartiteCreditNetwork& net, const Partition& p) {
  return modularity(net.graph(), p);
}

enum class DetectionMethod { Divisive, Greedy };

inline std::string_view method_name(DetectionMethod m) {
  return m == DetectionMethod::Divisive ? "girvan_newman" : "greedy_agglomerative";
}

struct CommunityResult {
  Partition partition;
  double q = 0.0;
  DetectionMethod method = DetectionMethod::Divisive;
};

struct DetectionOptions {
  // Above this many edges the greedy agglomerative optimizer replaces the
  // divisive algorithm.
  std::size_t divisive_edge_limit = 5000;
};

namespace detail {

// Strict preference: higher Q, then fewer communities, then the
// lexicographically smaller assignment.
inline bool better_partition(double q, const Partition& p, double best_q, const Partition& best) {
  constexpr double kTol = 1e-12;
  if (q > best_q + kTol) return true;
  if (q < best_q - kTol) return false;
  if (p.community_count() != best.community_count()) return p.community_count() < best.community_count();
  return p.assignment() < best.assignment();
}

inline CommunityResult girvan_newman(Graph g) {
  const Graph original = g;
  CommunityResult best{Partition::from_components(connected_components(g)), 0.0, DetectionMethod::Divisive};
  best.q = modularity(original, best.partition);
  std::size_t last_count = best.partition.community_count();
  while (g.edge_count() > 0) {
    const auto edges = g.edges();
    const auto eb = edge_betweenness(g);
    std::size_t pick = 0;
    for (std::size_t e = 1; e < eb.size(); ++e) {
      if (eb[e] > eb[pick] * (1.0 + 1e-12)) pick = e;
    }
    g.remove_edge(edges[pick].first, edges[pick].second);
    auto comps = connected_components(g);
    if (comps.count() == last_count) continue;
    last_count = comps.count();
    Partition p = Partition::from_components(comps);
    const double q = modularity(original, p);
    if (better_partition(q, p, best.q, best.partition)) best = {std::move(p), q, DetectionMethod::Divisive};
  }
  return best;
}

// Clauset-Newman-Moore style: repeatedly merge the adjacent community pair
// with the largest modularity gain, keeping the best partition seen.
inline CommunityResult greedy_agglomerative(const Graph& g) {
  const std::size_t n = g.capacity();
  const double m = static_cast<double>(g.edge_count());
  std::vector<std::map<std::size_t, double>> links(n);  // community -> edges to other communities
  std::vector<double> deg(n, 0.0);
  std::vector<std::vector<Vertex>> group(n);
  for (Vertex v = 0; v < n; ++v) group[v] = {v};
  for (Vertex v = 0; v < n; ++v) deg[v] = static_cast<double>(g.degree(v));
  for (auto [u, v] : g.edges()) {
    links[u][v] += 1.0;
    links[v][u] += 1.0;
  }
  std::vector<bool> alive(n, true);
  double q = 0.0;
  for (Vertex v = 0; v < n; ++v) q -= (deg[v] / (2 * m)) * (deg[v] / (2 * m));

  auto current = [&] {
    std::vector<std::size_t> a(n);
    for (std::size_t c = 0; c < n; ++c) {
      for (Vertex v : group[c]) a[v] = c;
    }
    return Partition(std::move(a));
  };

  CommunityResult best{current(), q, DetectionMethod::Greedy};
  for (;;) {
    double best_gain = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (const auto& [b, l] : links[a]) {
        if (b <= a) continue;
        const double gain = l / m - 2.0 * deg[a] * deg[b] / (4 * m * m);
        if (!pick || gain > best_gain + 1e-15) {
          best_gain = gain;
          pick = {a, b};
        }
      }
    }
    if (!pick) break;
    auto [a, b] = *pick;
    // merge b into a
    for (const auto& [c, l] : links[b]) {
      if (c == a) continue;
      links[a][c] += l;
      links[c].erase(b);
      links[c][a] += l;
    }
    links[a].erase(b);
    links[b].clear();
    deg[a] += deg[b];
    alive[b] = false;
    group[a].insert(group[a].end(), group[b].begin(), group[b].end());
    group[b].clear();
    q += best_gain;
    Partition p = current();
    if (better_partition(q, p, best.q, best.partition)) {
      best.partition = std::move(p);
      best.q = q;
    }
  }
  best.q = modularity(g, best.partition);
  return best;
}

}  // namespace detail

inline CommunityResult detect_communities(const Graph& g, const DetectionOptions& opt = {}) {
  if (g.edge_count() == 0) throw InvalidArgument("community detection needs at least one edge");
  if (g.edge_count() > opt.divisive_edge_limit) return detail::greedy_agglomerative(g);
  return detail::girvan_newman(g);
}

inline CommunityResult detect_communities(const BipartiteCreditNetwork& net, const DetectionOptions& opt = {}) {
  return detect_communities(net.graph(), opt);
}

struct CommunitySummary {
  std::size_t n_communities = 0;
  double largest_share = 0.0;
  std::size_t largest_community = 0;
  std::optional<std::string> representative_institution_type;
  std::optional<std::string> representative_industry;
};

// Largest community by vertex count; ties go to the greater internal credit
// weight, then to the community with the smaller smallest vertex. The
// representative labels carry the most credit on edges inside it.
inline CommunitySummary summarize_largest(const BipartiteCreditNetwork& net, const Partition& p) {
  if (p.size() == 0) throw InvalidArgument("empty partition");
  if (p.size() != net.vertex_count()) throw InvalidArgument("partition does not cover the network");
  const auto members = p.members();
  std::vector<double> internal(p.community_count(), 0.0);
  for (const auto& e : net.edges()) {
    const Vertex u = net.vertex(Side::Institution, e.institution), v = net.vertex(Side::Firm, e.firm);
    if (p.same(u, v)) internal[p[u]] += e.weight;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < members.size(); ++c) {
    if (members[c].size() > members[best].size() ||
        (members[c].size() == members[best].size() && internal[c] > internal[best])) {
      best = c;
    }
  }

  std::map<std::string, double> by_type, by_industry;
  for (const auto& e : net.edges()) {
    const Vertex u = net.vertex(Side::Institution, e.institution), v = net.vertex(Side::Firm, e.firm);
    if (p[u] != best || p[v] != best) continue;
    by_type[net.institutions()[e.institution].type] += e.weight;
    by_industry[net.firms()[e.firm].industry] += e.weight;
  }
  auto argmax = [](const std::map<std::string, double>& m) -> std::optional<std::string> {
    std::optional<std::string> label;
    double top = 0.0;
    for (const auto& [k, w] : m) {
      if (w > top) {
        top = w;
        label = k;
      }
    }
    return label;
  };

  CommunitySummary s;
  s.n_communities = p.community_count();
  s.largest_community = best;
  s.largest_share = static_cast<double>(members[best].size()) / static_cast<double>(p.size());
  s.representative_institution_type = argmax(by_type);
  s.representative_industry = argmax(by_industry);
  return s;
}

inline nlohmann::ordered_json to_json(const CommunitySummary& s) {
  nlohmann::ordered_json j;
  j["n_communities"] = s.n_communities;
  j["largest_share"] = s.largest_share;
  j["representative_institution_type"] =
      s.representative_institution_type ? nlohmann::ordered_json(*s.representative_institution_type) : nlohmann::ordered_json(nullptr);
  j["representative_industry"] =
      s.representative_industry ? nlohmann::ordered_json(*s.representative_industry) : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace creditnet
