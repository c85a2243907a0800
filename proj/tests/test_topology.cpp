#include <gtest/gtest.h>

#include "support.hpp"

using namespace creditnet;
using testing_support::g0;
using testing_support::vid;
using testing_support::Rational;
using testing_support::enumerated_betweenness;

namespace {

Graph make(std::size_t n, std::vector<Edge> e) { return Graph(n, e); }

Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.push_back({0, v});
  return make(leaves + 1, e);
}

}  // namespace

TEST(VertexMetrics, G0HandValues) {
  const auto net = g0();
  const auto m = vertex_metrics(net);
  const auto b1 = vid(net, Side::Institution, "B1"), b2 = vid(net, Side::Institution, "B2");
  const auto f1 = vid(net, Side::Firm, "F1"), f2 = vid(net, Side::Firm, "F2");
  EXPECT_EQ(m[b1].degree, 2u);
  EXPECT_EQ(m[b2].degree, 1u);
  EXPECT_EQ(m[f1].degree, 1u);
  EXPECT_EQ(m[f2].degree, 2u);
  EXPECT_EQ(m[b1].strength, 150.0);
  EXPECT_EQ(m[b2].strength, 200.0);
  EXPECT_EQ(m[f1].strength, 100.0);
  EXPECT_EQ(m[f2].strength, 250.0);
  EXPECT_NEAR(m[b1].relative_strength, 1.2, 1e-12);
  EXPECT_NEAR(m[f2].relative_strength, 50.0 / 150 + 1.0, 1e-12);
  EXPECT_EQ(m[b2].key.id, "B2");
}

TEST(VertexMetrics, ShareSumsAndDegreeSums) {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const auto net = testing_support::random_network(rng, 1 + uniform_index(rng, 20), 1 + uniform_index(rng, 20), 0.2);
    const auto m = vertex_metrics(net);
    double rb = 0, rf = 0, sb = 0, sf = 0;
    std::size_t kb = 0, kf = 0, active_f = 0, active_b = 0;
    for (Vertex v = 0; v < m.size(); ++v) {
      const bool inst = v < net.institution_count();
      (inst ? rb : rf) += m[v].relative_strength;
      (inst ? sb : sf) += m[v].strength;
      (inst ? kb : kf) += m[v].degree;
      if (m[v].degree) ++(inst ? active_b : active_f);
      EXPECT_EQ(m[v].strength > 0, m[v].degree > 0);
      // brute-force share oracle
      double share = 0;
      const auto [side, i] = net.locate(v);
      if (side == Side::Institution) {
        for (std::size_t f = 0; f < net.firm_count(); ++f) {
          double col = 0;
          for (std::size_t j = 0; j < net.institution_count(); ++j) col += net.weight(j, f);
          if (net.weight(i, f) > 0) share += net.weight(i, f) / col;
        }
      } else {
        for (std::size_t j = 0; j < net.institution_count(); ++j) {
          double row = 0;
          for (std::size_t f = 0; f < net.firm_count(); ++f) row += net.weight(j, f);
          if (net.weight(j, i) > 0) share += net.weight(j, i) / row;
        }
      }
      EXPECT_NEAR(m[v].relative_strength, share, 1e-12);
    }
    EXPECT_EQ(kb, net.edge_count());
    EXPECT_EQ(kf, net.edge_count());
    EXPECT_EQ(sb, net.total_weight());
    EXPECT_EQ(sf, net.total_weight());
    EXPECT_NEAR(rb, static_cast<double>(active_f), 1e-9);
    EXPECT_NEAR(rf, static_cast<double>(active_b), 1e-9);
  }
}

TEST(Pearson, Examples) {
  const std::vector<double> x = {1, 2, 3, 4}, twice = {2, 4, 6, 8}, neg = {-1, -2, -3, -4};
  EXPECT_NEAR(pearson(x, twice), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, neg), -1.0, 1e-15);
  const std::vector<double> a = {1, 2, 3}, b = {1, 3, 2};
  EXPECT_NEAR(pearson(a, b), 0.5, 1e-15);
  const std::vector<double> flat = {5, 5, 5};
  EXPECT_THROW(pearson(a, flat), UndefinedError);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), InvalidArgument);
}

TEST(Clustering, Examples) {
  const auto tri = clustering(make(3, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(tri.local, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(tri.global, 1.0);

  const auto s = clustering(star(4));
  for (double c : s.local) EXPECT_EQ(c, 0.0);
  EXPECT_EQ(s.global, 0.0);

  const auto pend = clustering(make(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}));
  EXPECT_NEAR(pend.local[2], 1.0 / 3, 1e-15);
  EXPECT_EQ(pend.local[3], 0.0);
  EXPECT_NEAR(pend.global, (0 + 1.0 / 3 + 1 + 1) / 4, 1e-15);
}

TEST(Clustering, MatchesNeighborPairCount) {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const auto g = testing_support::random_graph(rng, 1 + uniform_index(rng, 25), 0.3);
    const auto c = clustering(g);
    for (Vertex v = 0; v < g.capacity(); ++v) {
      const auto nb = g.neighbors(v);
      std::size_t links = 0;
      for (std::size_t a = 0; a < nb.size(); ++a) {
        for (std::size_t b = a + 1; b < nb.size(); ++b) links += g.has_edge(nb[a], nb[b]);
      }
      const double d = static_cast<double>(nb.size());
      EXPECT_NEAR(c.local[v], nb.size() > 1 ? static_cast<double>(links) / (d * (d - 1) / 2) : 0.0, 1e-12);
      EXPECT_GE(c.local[v], 0.0);
      EXPECT_LE(c.local[v], 1.0);
    }
  }
}

TEST(Assortativity, Examples) {
  EXPECT_EQ(assortativity(star(4)), -1.0);
  EXPECT_EQ(assortativity(make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})), std::nullopt);
  EXPECT_EQ(assortativity(make(4, {{0, 1}, {1, 2}, {2, 3}})), -0.5);
  EXPECT_THROW(assortativity(Graph(3)), InvalidArgument);
}

// Pearson correlation over both orientations of every edge.
TEST(Assortativity, MatchesEdgeEnumerationAndRelabeling) {
  Rng rng(29);
  for (int t = 0; t < 60; ++t) {
    const auto g = testing_support::random_graph(rng, 3 + uniform_index(rng, 25), 0.2);
    if (g.edge_count() == 0) continue;
    const auto r = assortativity(g);
    std::vector<double> xs, ys;
    for (auto [u, v] : g.edges()) {
      xs.push_back(static_cast<double>(g.degree(u)));
      ys.push_back(static_cast<double>(g.degree(v)));
      xs.push_back(static_cast<double>(g.degree(v)));
      ys.push_back(static_cast<double>(g.degree(u)));
    }
    std::optional<double> oracle;
    try {
      oracle = pearson(xs, ys);
    } catch (const UndefinedError&) {
    }
    ASSERT_EQ(r.has_value(), oracle.has_value());
    if (r) {
      EXPECT_NEAR(*r, *oracle, 1e-9);
      EXPECT_GE(*r, -1.0);
      EXPECT_LE(*r, 1.0);
    }

    std::vector<Vertex> perm(g.capacity());
    for (Vertex v = 0; v < perm.size(); ++v) perm[v] = v;
    shuffle(perm, rng);
    std::vector<Edge> relabeled;
    for (auto [u, v] : g.edges()) relabeled.push_back({perm[u], perm[v]});
    const auto r2 = assortativity(Graph(g.capacity(), relabeled));
    ASSERT_EQ(r.has_value(), r2.has_value());
    if (r) {
      EXPECT_EQ(*r, *r2);
    }
  }
}

TEST(Betweenness, Examples) {
  EXPECT_EQ(betweenness(make(3, {{0, 1}, {1, 2}})), (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(betweenness(make(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})), (std::vector<double>{0.5, 0.5, 0.5, 0.5}));
  EXPECT_EQ(betweenness(star(4))[0], 6.0);
}

TEST(Betweenness, TreeEqualsSeparatedPairs) {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto g = testing_support::random_tree(rng, 1 + uniform_index(rng, 30));
    const auto b = betweenness(g);
    for (Vertex v = 0; v < g.capacity(); ++v) {
      Graph cut = g;
      cut.remove_vertex(v);
      const auto comps = connected_components(cut);
      double separated = 0, total = 0;
      for (const auto& m : comps.members) {
        separated += total * static_cast<double>(m.size());
        total += static_cast<double>(m.size());
      }
      EXPECT_NEAR(b[v], separated, 1e-9);
    }
  }
}

TEST(Betweenness, MatchesRationalEnumeration) {
  Rng rng(37);
  for (int t = 0; t < 25; ++t) {
    const auto g = testing_support::random_graph(rng, 2 + uniform_index(rng, 20), 0.2);
    const auto b = betweenness(g);
    const auto exact = betweenness<Rational>(g);
    const auto oracle = enumerated_betweenness(g);
    for (Vertex v = 0; v < g.capacity(); ++v) {
      EXPECT_EQ(exact[v], oracle[v]);
      const double x = oracle[v].convert_to<double>();
      EXPECT_NEAR(b[v], x, 1e-12 * std::max(1.0, x));
    }
  }
}

TEST(EdgeBetweenness, SumsToPairDistances) {
  // Each connected pair spreads exactly d(s,t) units of credit over edges.
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const auto g = testing_support::random_graph(rng, 2 + uniform_index(rng, 20), 0.25);
    const auto eb = edge_betweenness(g);
    const auto d = testing_support::floyd_warshall(g);
    double total = 0, expected = 0;
    for (double x : eb) total += x;
    for (Vertex s = 0; s < g.capacity(); ++s) {
      for (Vertex u = s + 1; u < g.capacity(); ++u) expected += d[s][u] > 0 ? static_cast<double>(d[s][u]) : 0.0;
    }
    EXPECT_NEAR(total, expected, 1e-9 * std::max(1.0, expected));
  }
}

TEST(Closeness, Examples) {
  const auto c = closeness(make(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(c.value[1], 1.5);
  EXPECT_EQ(c.value[0], 1.0);
  const auto iso = closeness(make(3, {{0, 1}}));
  EXPECT_EQ(iso.value[2], 0.0);
  EXPECT_TRUE(iso.isolated[2]);
  EXPECT_FALSE(iso.isolated[0]);
}

TEST(Closeness, MatchesFloydWarshall) {
  Rng rng(43);
  for (int t = 0; t < 50; ++t) {
    const auto g = testing_support::random_graph(rng, 1 + uniform_index(rng, 30), 0.15);
    const auto c = closeness(g);
    const auto d = testing_support::floyd_warshall(g);
    for (Vertex v = 0; v < g.capacity(); ++v) {
      double sum = 0;
      for (long x : d[v]) sum += x > 0 ? static_cast<double>(x) : 0.0;
      EXPECT_NEAR(c.value[v], sum > 0 ? static_cast<double>(g.capacity()) / sum : 0.0, 1e-9);
    }
  }
}

TEST(Skewness, Examples) {
  EXPECT_NEAR(skewness(std::vector<double>{-1, 0, 1}), 0.0, 1e-15);
  EXPECT_GT(skewness(std::vector<double>{0, 0, 0, 10}), 0.0);
  const std::vector<double> v = {1, 2, 3, 4, 100};
  const double n = 5, mean = 110.0 / 5;
  double m2 = 0, m3 = 0;
  for (double x : v) {
    m2 += (x - mean) * (x - mean) / n;
    m3 += (x - mean) * (x - mean) * (x - mean) / n;
  }
  EXPECT_NEAR(skewness(v), m3 / std::pow(m2, 1.5) * std::sqrt(n * (n - 1)) / (n - 2), 1e-12);
  EXPECT_THROW(skewness(std::vector<double>{2, 2, 2}), UndefinedError);
  EXPECT_THROW(skewness(std::vector<double>{1, 2}), InvalidArgument);
}

TEST(FullVertexMetrics, G0) {
  const auto net = g0();
  const auto m = full_vertex_metrics(net);
  const auto b1 = vid(net, Side::Institution, "B1"), f2 = vid(net, Side::Firm, "F2");
  // Path F1 - B1 - F2 - B2.
  EXPECT_EQ(m[b1].betweenness, 2.0);
  EXPECT_EQ(m[f2].betweenness, 2.0);
  EXPECT_NEAR(m[b1].closeness, 4.0 / 4, 1e-12);
  EXPECT_NEAR(m[vid(net, Side::Firm, "F1")].closeness, 4.0 / 6, 1e-12);
  for (const auto& x : m) EXPECT_EQ(x.local_clustering, 0.0);
  const auto gm = graph_metrics(net.graph());
  EXPECT_EQ(gm.edge_count, 3u);
  EXPECT_EQ(gm.vertex_count, 4u);
}

TEST(Aggregate, MeanAndSum) {
  const std::vector<double> v = {1, 3, 2};
  const std::vector<std::string> l = {"a", "a", "b"};
  EXPECT_EQ(aggregate_by_label(v, l, Aggregation::Mean), (std::map<std::string, double>{{"a", 2}, {"b", 2}}));
  EXPECT_EQ(aggregate_by_label(v, l, Aggregation::Sum), (std::map<std::string, double>{{"a", 4}, {"b", 2}}));
}
