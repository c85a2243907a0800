#pragma once

// Vertex-removal attacks (CRS-ordered vs. random) and the four connectivity
// indices tracked under attack.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "creditnet/bipartite.hpp"
#include "creditnet/crs.hpp"
#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"
#include "creditnet/graph.hpp"
#include "creditnet/random.hpp"

namespace creditnet {

struct ConnectivitySnapshot {
  std::size_t slcs = 0;  // largest connected component size
  std::size_t nc = 0;    // number of connected components
  double gd = 0.0;       // graph density
  double apl = 0.0;      // mean hop distance over reachable unordered pairs
  bool apl_defined = false;

  friend bool operator==(const ConnectivitySnapshot&, const ConnectivitySnapshot&) = default;
};

// Density is M / (|B| |F|) for a two-mode graph and 2m / (n (n - 1))
// otherwise, over live vertices. APL is 0 with apl_defined = false when no
// pair of distinct vertices is connected.
inline ConnectivitySnapshot connectivity(const Graph& g) {
  if (g.vertex_count() == 0) throw InvalidArgument("connectivity of an empty graph");
  ConnectivitySnapshot s;
  const auto comps = connected_components(g);
  s.slcs = comps.largest_size();
  s.nc = comps.count();
  const double m = static_cast<double>(g.edge_count());
  if (g.bipartite()) {
    const auto [b, f] = g.side_counts();
    s.gd = b && f ? m / (static_cast<double>(b) * static_cast<double>(f)) : 0.0;
  } else {
    const double n = static_cast<double>(g.vertex_count());
    s.gd = n > 1 ? 2.0 * m / (n * (n - 1)) : 0.0;
  }
  double total = 0.0;
  std::uint64_t pairs = 0;
  for (Vertex v = 0; v < g.capacity(); ++v) {
    if (!g.contains(v)) continue;
    const auto row = shortest_paths(g, v);
    for (Vertex u : row.order) {
      if (u > v) {
        total += static_cast<double>(row.distance[u]);
        ++pairs;
      }
    }
  }
  if (pairs) {
    s.apl = total / static_cast<double>(pairs);
    s.apl_defined = true;
  }
  return s;
}

inline ConnectivitySnapshot connectivity(const BipartiteCreditNetwork& net) { return connectivity(net.graph()); }

enum class AttackStrategy { Crs, Random };

inline std::string_view strategy_name(AttackStrategy s) { return s == AttackStrategy::Crs ? "crs" : "random"; }

struct AttackOptions {
  AttackStrategy strategy = AttackStrategy::Crs;
  double fraction = 0.05;
  std::uint64_t seed = 0;  // random strategy only
  bool adaptive = false;   // crs strategy: re-rank on the damaged network after each removal
  bool record_steps = true;  // false keeps only the baseline and final snapshots
};

// Relative change final vs. baseline, in percent, signed so that damage is
// positive for SLCS and GD: (baseline - final) / baseline * 100. NC and APL
// growth therefore shows as negative. A zero baseline yields 0.
struct PercentChange {
  double slcs = 0.0;
  double nc = 0.0;
  double gd = 0.0;
  double apl = 0.0;
};

inline PercentChange percent_change(const ConnectivitySnapshot& base, const ConnectivitySnapshot& last) {
  auto pc = [](double b, double f) { return b == 0.0 ? 0.0 : (b - f) / b * 100.0; };
  return {pc(static_cast<double>(base.slcs), static_cast<double>(last.slcs)),
          pc(static_cast<double>(base.nc), static_cast<double>(last.nc)), pc(base.gd, last.gd),
          pc(base.apl, last.apl)};
}

struct AttackTrace {
  AttackStrategy strategy = AttackStrategy::Crs;
  Side side = Side::Institution;
  std::vector<VertexKey> removed;
  std::vector<ConnectivitySnapshot> snapshots;  // baseline first
  PercentChange change;
};

inline std::size_t removal_budget(double fraction, std::size_t side_size) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("attack fraction must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(side_size) - 1e-9));
  return std::min(std::max<std::size_t>(k, 1), side_size);
}

namespace detail {

// CRS order of the still-present `side` vertices of `g`, computed on the
// sub-network induced by the live vertices.
inline std::vector<Vertex> crs_order(const BipartiteCreditNetwork& net, Side side, const std::set<Vertex>& removed) {
  std::vector<CreditEdge> edges;
  for (const auto& e : net.edges()) {
    if (removed.contains(net.vertex(Side::Institution, e.institution)) ||
        removed.contains(net.vertex(Side::Firm, e.firm))) {
      continue;
    }
    edges.push_back(e);
  }
  const BipartiteCreditNetwork damaged(net.period(), net.institutions(), net.firms(), std::move(edges));
  std::vector<Vertex> order;
  for (const auto& e : crs_all(damaged)) {
    if (e.key.side == side) order.push_back(e.vertex);
  }
  // Isolated survivors carry no CRS; they go last in id order.
  const std::size_t first = side == Side::Institution ? 0 : net.institution_count();
  const std::size_t count = side == Side::Institution ? net.institution_count() : net.firm_count();
  for (Vertex v = first; v < first + count; ++v) {
    if (!removed.contains(v) && damaged.degree(v) == 0) order.push_back(v);
  }
  return order;
}

}  // namespace detail

// Removes ceil(fraction * |side|) vertices of one side, one at a time,
// recording connectivity after each removal unless record_steps is off.
inline AttackTrace attack(const BipartiteCreditNetwork& net, Side side, const AttackOptions& opt) {
  const std::size_t side_size = side == Side::Institution ? net.institution_count() : net.firm_count();
  if (side_size == 0) throw InvalidArgument("attacked side is empty");
  const std::size_t budget = removal_budget(opt.fraction, side_size);

  AttackTrace trace;
  trace.strategy = opt.strategy;
  trace.side = side;
  Graph g = net.graph();
  trace.snapshots.push_back(connectivity(g));

  std::vector<Vertex> order;
  if (opt.strategy == AttackStrategy::Crs) {
    order = detail::crs_order(net, side, {});
  } else {
    const std::size_t first = side == Side::Institution ? 0 : net.institution_count();
    for (std::size_t i = 0; i < side_size; ++i) order.push_back(first + i);
    Rng rng(opt.seed);
    shuffle(order, rng);
  }

  std::set<Vertex> removed;
  for (std::size_t step = 0; step < budget; ++step) {
    const bool rerank = opt.strategy == AttackStrategy::Crs && opt.adaptive && step > 0;
    const Vertex v = rerank ? detail::crs_order(net, side, removed).front() : order.at(step);
    g.remove_vertex(v);
    removed.insert(v);
    trace.removed.push_back(net.key(v));
    if (opt.record_steps || step + 1 == budget) trace.snapshots.push_back(connectivity(g));
  }
  trace.change = percent_change(trace.snapshots.front(), trace.snapshots.back());
  return trace;
}

struct StrategyComparison {
  Side side = Side::Institution;
  double fraction = 0.0;
  std::size_t trials = 0;
  PercentChange crs;
  PercentChange random_mean;
  PercentChange random_stderr;  // standard error of the mean over trials
  AttackTrace crs_trace;
};

// One CRS-ordered attack against n_random_trials random attacks; random
// trial t uses seed + t.
inline StrategyComparison compare_strategies(const BipartiteCreditNetwork& net, Side side, double fraction,
                                             std::size_t n_random_trials, std::uint64_t seed) {
  if (n_random_trials < 1) throw InvalidArgument("need at least one random trial");
  StrategyComparison c;
  c.side = side;
  c.fraction = fraction;
  c.trials = n_random_trials;
  c.crs_trace = attack(net, side, {AttackStrategy::Crs, fraction, 0, false});
  c.crs = c.crs_trace.change;

  std::vector<std::array<double, 4>> samples;
  for (std::size_t t = 0; t < n_random_trials; ++t) {
    const auto tr = attack(net, side, {AttackStrategy::Random, fraction, seed + t, false, false});
    samples.push_back({tr.change.slcs, tr.change.nc, tr.change.gd, tr.change.apl});
  }
  std::array<double, 4> mean{}, se{};
  const double n = static_cast<double>(samples.size());
  for (const auto& s : samples) {
    for (int k = 0; k < 4; ++k) mean[k] += s[k] / n;
  }
  if (samples.size() > 1) {
    for (int k = 0; k < 4; ++k) {
      double ss = 0;
      for (const auto& s : samples) ss += (s[k] - mean[k]) * (s[k] - mean[k]);
      se[k] = std::sqrt(ss / (n - 1) / n);
    }
  }
  c.random_mean = {mean[0], mean[1], mean[2], mean[3]};
  c.random_stderr = {se[0], se[1], se[2], se[3]};
  return c;
}

inline void write_trace_rows(csv::Writer& w, const AttackTrace& t, const std::string& label) {
  for (std::size_t step = 0; step < t.snapshots.size(); ++step) {
    const auto& s = t.snapshots[step];
    w.row({label, std::to_string(step), std::to_string(s.slcs), std::to_string(s.nc), csv::format_double(s.gd),
           csv::format_double(s.apl)});
  }
}

inline nlohmann::ordered_json to_json(const PercentChange& p) {
  return {{"SLCS", p.slcs}, {"NC", p.nc}, {"GD", p.gd}, {"APL", p.apl}};
}

inline nlohmann::ordered_json to_json(const StrategyComparison& c) {
  nlohmann::ordered_json j;
  j["side"] = side_name(c.side);
  j["fraction"] = c.fraction;
  j["removed"] = c.crs_trace.removed.size();
  j["random_trials"] = c.trials;
  j["CRS"] = to_json(c.crs);
  j["Random"] = to_json(c.random_mean);
  j["Random_stderr"] = to_json(c.random_stderr);
  return j;
}

}  // namespace creditnet
