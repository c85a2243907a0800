#pragma once

// Per-period institution-firm credit network (binary and weighted
// adjacency) and its two one-mode projections.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"
#include "creditnet/graph.hpp"
#include "creditnet/ingest.hpp"

namespace creditnet {

enum class Side : std::uint8_t { Institution, Firm };

inline std::string_view side_name(Side s) { return s == Side::Institution ? "institution" : "firm"; }

struct VertexKey {
  Side side;
  std::string id;
  auto operator<=>(const VertexKey&) const = default;
};

struct InstitutionInfo {
  std::string id;
  std::string name;
  std::string type;
};

struct FirmInfo {
  std::string id;
  std::string name;
  std::string industry;
};

struct CreditEdge {
  std::size_t institution;
  std::size_t firm;
  double weight;  // aggregated amount, strictly positive
};

// Neighbor on the other side with the pair's credit weight.
struct Link {
  std::size_t other;
  double weight;
};

class BipartiteCreditNetwork {
 public:
  BipartiteCreditNetwork() = default;

  // Institutions and firms are indexed in ascending id order. Edges with a
  // non-positive aggregated weight are dropped.
  BipartiteCreditNetwork(int period, std::vector<InstitutionInfo> institutions, std::vector<FirmInfo> firms,
                         std::vector<CreditEdge> edges)
      : period_(period), institutions_(std::move(institutions)), firms_(std::move(firms)) {
    std::map<std::pair<std::size_t, std::size_t>, double> agg;
    for (const auto& e : edges) {
      if (e.institution >= institutions_.size() || e.firm >= firms_.size()) {
        throw InvalidArgument("edge endpoint out of range");
      }
      agg[{e.institution, e.firm}] += e.weight;
    }
    lending_.resize(institutions_.size());
    borrowing_.resize(firms_.size());
    lending_total_.assign(institutions_.size(), 0.0);
    borrowing_total_.assign(firms_.size(), 0.0);
    for (const auto& [key, w] : agg) {
      if (!(w > 0)) continue;
      edges_.push_back({key.first, key.second, w});
      lending_[key.first].push_back({key.second, w});
      borrowing_[key.second].push_back({key.first, w});
      lending_total_[key.first] += w;
      borrowing_total_[key.second] += w;
      total_weight_ += w;
    }
  }

  int period() const noexcept { return period_; }
  const std::vector<InstitutionInfo>& institutions() const noexcept { return institutions_; }
  const std::vector<FirmInfo>& firms() const noexcept { return firms_; }
  std::size_t institution_count() const noexcept { return institutions_.size(); }
  std::size_t firm_count() const noexcept { return firms_.size(); }
  std::size_t vertex_count() const noexcept { return institutions_.size() + firms_.size(); }

  // Edges sorted by (institution, firm).
  const std::vector<CreditEdge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  double total_weight() const noexcept { return total_weight_; }

  std::span<const Link> lending(std::size_t institution) const { return lending_.at(institution); }
  std::span<const Link> borrowing(std::size_t firm) const { return borrowing_.at(firm); }
  // C_B: institution's total lending.
  double lending_total(std::size_t institution) const { return lending_total_.at(institution); }
  // C_F: firm's total borrowing.
  double borrowing_total(std::size_t firm) const { return borrowing_total_.at(firm); }

  double weight(std::size_t institution, std::size_t firm) const {
    const auto& links = lending_.at(institution);
    auto it = std::lower_bound(links.begin(), links.end(), firm,
                               [](const Link& l, std::size_t f) { return l.other < f; });
    return it != links.end() && it->other == firm ? it->weight : 0.0;
  }

  std::optional<std::size_t> find_institution(std::string_view id) const {
    auto it = std::lower_bound(institutions_.begin(), institutions_.end(), id,
                               [](const InstitutionInfo& i, std::string_view v) { return i.id < v; });
    if (it == institutions_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - institutions_.begin());
  }

  std::optional<std::size_t> find_firm(std::string_view id) const {
    auto it = std::lower_bound(firms_.begin(), firms_.end(), id,
                               [](const FirmInfo& f, std::string_view v) { return f.id < v; });
    if (it == firms_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - firms_.begin());
  }

  // Unified vertex numbering: institutions first, then firms.
  Vertex vertex(Side side, std::size_t index) const {
    return side == Side::Institution ? index : institutions_.size() + index;
  }
  std::pair<Side, std::size_t> locate(Vertex v) const {
    if (v < institutions_.size()) return {Side::Institution, v};
    return {Side::Firm, v - institutions_.size()};
  }
  VertexKey key(Vertex v) const {
    auto [side, i] = locate(v);
    return {side, side == Side::Institution ? institutions_.at(i).id : firms_.at(i).id};
  }
  std::optional<Vertex> find(const VertexKey& k) const {
    auto idx = k.side == Side::Institution ? find_institution(k.id) : find_firm(k.id);
    if (!idx) return std::nullopt;
    return vertex(k.side, *idx);
  }

  std::size_t degree(Vertex v) const {
    auto [side, i] = locate(v);
    return side == Side::Institution ? lending_.at(i).size() : borrowing_.at(i).size();
  }

  // Unweighted two-mode view (a_BF as a simple undirected graph).
  Graph graph() const {
    std::vector<Edge> e;
    e.reserve(edges_.size());
    for (const auto& c : edges_) e.emplace_back(c.institution, institutions_.size() + c.firm);
    Graph g(vertex_count(), e);
    g.set_bipartition(institutions_.size());
    return g;
  }

 private:
  int period_ = 0;
  std::vector<InstitutionInfo> institutions_;
  std::vector<FirmInfo> firms_;
  std::vector<CreditEdge> edges_;
  std::vector<std::vector<Link>> lending_;
  std::vector<std::vector<Link>> borrowing_;
  std::vector<double> lending_total_;
  std::vector<double> borrowing_total_;
  double total_weight_ = 0.0;
};

// All records must share one period. Same-pair loans are summed. Vertex
// labels come from the first record naming the vertex.
inline BipartiteCreditNetwork build_bipartite(std::span<const LoanRecord> records) {
  if (records.empty()) return {};
  const int period = records.front().period;
  std::map<std::string, InstitutionInfo> inst;
  std::map<std::string, FirmInfo> firms;
  for (const auto& r : records) {
    if (r.period != period) throw InvalidArgument("records span more than one period");
    if (!r.amount) throw InvalidArgument("record without amount; preprocess the ledger first");
    inst.try_emplace(r.lender_id, InstitutionInfo{r.lender_id, r.lender_name, r.lender_type});
    firms.try_emplace(r.borrower_id, FirmInfo{r.borrower_id, r.borrower_name, r.borrower_industry});
  }
  std::vector<InstitutionInfo> iv;
  std::map<std::string, std::size_t> iidx;
  for (auto& [id, info] : inst) {
    iidx[id] = iv.size();
    iv.push_back(std::move(info));
  }
  std::vector<FirmInfo> fv;
  std::map<std::string, std::size_t> fidx;
  for (auto& [id, info] : firms) {
    fidx[id] = fv.size();
    fv.push_back(std::move(info));
  }
  std::vector<CreditEdge> edges;
  edges.reserve(records.size());
  for (const auto& r : records) edges.push_back({iidx.at(r.lender_id), fidx.at(r.borrower_id), *r.amount});
  return BipartiteCreditNetwork(period, std::move(iv), std::move(fv), std::move(edges));
}

// One-mode projection; vertex i of `graph` is ids[i].
struct ProjectedNetwork {
  Side side = Side::Institution;
  std::vector<std::string> ids;
  Graph graph;
};

// a_BB: institutions linked iff they lend to at least one common firm.
inline ProjectedNetwork project_institutions(const BipartiteCreditNetwork& net) {
  std::vector<Edge> e;
  for (std::size_t f = 0; f < net.firm_count(); ++f) {
    auto links = net.borrowing(f);
    for (std::size_t a = 0; a < links.size(); ++a) {
      for (std::size_t b = a + 1; b < links.size(); ++b) e.emplace_back(links[a].other, links[b].other);
    }
  }
  ProjectedNetwork p;
  p.side = Side::Institution;
  for (const auto& i : net.institutions()) p.ids.push_back(i.id);
  p.graph = Graph(net.institution_count(), e);
  return p;
}

// a_FF: firms linked iff they borrow from at least one common institution.
inline ProjectedNetwork project_firms(const BipartiteCreditNetwork& net) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < net.institution_count(); ++i) {
    auto links = net.lending(i);
    for (std::size_t a = 0; a < links.size(); ++a) {
      for (std::size_t b = a + 1; b < links.size(); ++b) e.emplace_back(links[a].other, links[b].other);
    }
  }
  ProjectedNetwork p;
  p.side = Side::Firm;
  for (const auto& f : net.firms()) p.ids.push_back(f.id);
  p.graph = Graph(net.firm_count(), e);
  return p;
}

// "institution_id firm_id weight" per line.
inline void write_edge_list(std::ostream& out, const BipartiteCreditNetwork& net) {
  for (const auto& e : net.edges()) {
    out << net.institutions()[e.institution].id << ' ' << net.firms()[e.firm].id << ' '
        << csv::format_double(e.weight) << '\n';
  }
}

// "u v" per line, u < v by index.
inline void write_edge_list(std::ostream& out, const ProjectedNetwork& p) {
  for (auto [u, v] : p.graph.edges()) out << p.ids[u] << ' ' << p.ids[v] << '\n';
}

inline nlohmann::ordered_json summary_json(const BipartiteCreditNetwork& net) {
  nlohmann::ordered_json j;
  j["period"] = net.period();
  j["n_institutions"] = net.institution_count();
  j["n_firms"] = net.firm_count();
  j["M"] = net.edge_count();
  j["total_weight"] = net.total_weight();
  return j;
}

}  // namespace creditnet
