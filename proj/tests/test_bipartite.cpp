#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "support.hpp"

using namespace creditnet;
using testing_support::g0;
using testing_support::vid;

TEST(BuildBipartite, G0) {
  const auto net = g0();
  EXPECT_EQ(net.institution_count(), 2u);
  EXPECT_EQ(net.firm_count(), 2u);
  EXPECT_EQ(net.edge_count(), 3u);
  EXPECT_EQ(net.weight(*net.find_institution("B1"), *net.find_firm("F2")), 50.0);
  EXPECT_EQ(net.weight(*net.find_institution("B2"), *net.find_firm("F1")), 0.0);
  EXPECT_EQ(net.total_weight(), 350.0);
  EXPECT_EQ(net.institutions()[1].type, "state-owned");
  EXPECT_EQ(net.firms()[1].industry, "real-estate");
}

TEST(BuildBipartite, SamePairLoansAggregate) {
  auto rs = testing_support::g0_records();
  rs.resize(1);
  rs.push_back(rs[0]);
  rs[0].amount = 60;
  rs[1].amount = 40;
  const auto net = build_bipartite(rs);
  ASSERT_EQ(net.edge_count(), 1u);
  EXPECT_EQ(net.edges()[0].weight, 100.0);
}

TEST(BuildBipartite, EmptyAndMixedPeriods) {
  const auto empty = build_bipartite(std::vector<LoanRecord>{});
  EXPECT_EQ(empty.edge_count(), 0u);
  EXPECT_EQ(empty.vertex_count(), 0u);
  auto rs = testing_support::g0_records();
  rs[2].period = 2004;
  EXPECT_THROW(build_bipartite(rs), InvalidArgument);
}

TEST(BuildBipartite, WeightSumMatchesLedger) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<LoanRecord> rs;
    double total = 0;
    for (int k = 0; k < 40; ++k) {
      LoanRecord r;
      r.period = 2000;
      r.lender_id = "B" + std::to_string(uniform_index(rng, 5));
      r.borrower_id = "F" + std::to_string(uniform_index(rng, 7));
      r.amount = static_cast<double>(1 + uniform_index(rng, 1000));
      r.currency = "CNY";
      total += *r.amount;
      rs.push_back(r);
    }
    const auto net = build_bipartite(rs);
    EXPECT_EQ(net.total_weight(), total);
    double edges = 0;
    for (const auto& e : net.edges()) edges += e.weight;
    EXPECT_EQ(edges, total);
  }
}

TEST(Projection, G0) {
  const auto net = g0();
  const auto pb = project_institutions(net);
  ASSERT_EQ(pb.graph.edge_count(), 1u);
  EXPECT_TRUE(pb.graph.has_edge(0, 1));
  EXPECT_EQ(pb.ids, (std::vector<std::string>{"B1", "B2"}));
  const auto pf = project_firms(net);
  ASSERT_EQ(pf.graph.edge_count(), 1u);
  EXPECT_EQ(pf.ids, (std::vector<std::string>{"F1", "F2"}));
}

TEST(Projection, EdgelessAndSingletons) {
  // B1-F1, B2-F2: nobody shares anything.
  const BipartiteCreditNetwork disjoint(2000, {{"B1", "", ""}, {"B2", "", ""}}, {{"F1", "", ""}, {"F2", "", ""}},
                                        {{0, 0, 1.0}, {1, 1, 1.0}});
  EXPECT_EQ(project_institutions(disjoint).graph.edge_count(), 0u);
  EXPECT_EQ(project_firms(disjoint).graph.edge_count(), 0u);
  const BipartiteCreditNetwork one_inst(2000, {{"B1", "", ""}}, {{"F1", "", ""}, {"F2", "", ""}},
                                        {{0, 0, 1.0}, {0, 1, 1.0}});
  EXPECT_EQ(project_institutions(one_inst).graph.vertex_count(), 1u);
  EXPECT_EQ(project_institutions(one_inst).graph.edge_count(), 0u);
  const BipartiteCreditNetwork one_firm(2000, {{"B1", "", ""}, {"B2", "", ""}}, {{"F1", "", ""}},
                                        {{0, 0, 1.0}, {1, 0, 1.0}});
  EXPECT_EQ(project_firms(one_firm).graph.vertex_count(), 1u);
  EXPECT_EQ(project_firms(one_firm).graph.edge_count(), 0u);
}

TEST(Projection, MatchesBruteForce) {
  Rng rng(101);
  for (int t = 0; t < 40; ++t) {
    const auto nb = 1 + uniform_index(rng, 30), nf = 1 + uniform_index(rng, 30);
    const auto net = testing_support::random_network(rng, nb, nf, 0.1 + 0.3 * uniform01(rng));
    const auto pb = project_institutions(net).graph;
    for (std::size_t i = 0; i < nb; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        bool shared = false;
        for (std::size_t k = 0; k < nf; ++k) shared = shared || (net.weight(i, k) > 0 && net.weight(j, k) > 0);
        EXPECT_EQ(pb.has_edge(i, j), i != j && shared);
      }
    }
    const auto pf = project_firms(net).graph;
    for (std::size_t a = 0; a < nf; ++a) {
      for (std::size_t b = 0; b < nf; ++b) {
        bool shared = false;
        for (std::size_t i = 0; i < nb; ++i) shared = shared || (net.weight(i, a) > 0 && net.weight(i, b) > 0);
        EXPECT_EQ(pf.has_edge(a, b), a != b && shared);
      }
    }
  }
}

TEST(Components, G0AndRemoval) {
  const auto net = g0();
  auto g = net.graph();
  auto c = connected_components(g);
  EXPECT_EQ(c.count(), 1u);
  EXPECT_EQ(c.largest_size(), 4u);
  g.remove_vertex(vid(net, Side::Institution, "B1"));
  c = connected_components(g);
  ASSERT_EQ(c.count(), 2u);
  // Labels ordered by smallest vertex: B2 (1) with F2 (3), then F1 (2).
  EXPECT_EQ(c.members[0], (std::vector<Vertex>{1, 3}));
  EXPECT_EQ(c.members[1], (std::vector<Vertex>{2}));
  EXPECT_EQ(c.label[0], -1);
}

TEST(Components, Edgeless) {
  const Graph g(3);
  EXPECT_EQ(connected_components(g).count(), 3u);
  EXPECT_EQ(connected_components(g).largest_size(), 1u);
}

TEST(Components, RemovalNeverGrowsLargest) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    auto g = testing_support::random_graph(rng, 2 + uniform_index(rng, 25), 0.15);
    const auto before = connected_components(g).largest_size();
    g.remove_vertex(uniform_index(rng, g.capacity()));
    EXPECT_LE(connected_components(g).largest_size(), before);
  }
}

TEST(ShortestPaths, PathCycleAndUnreachable) {
  const std::vector<Edge> path = {{0, 1}, {1, 2}};
  const auto p = shortest_paths(Graph(3, path), 0);
  EXPECT_EQ(p.distance[2], 2u);
  EXPECT_EQ(p.sigma[2], 1.0);

  const std::vector<Edge> cycle = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const auto c = shortest_paths(Graph(4, cycle), 0);
  EXPECT_EQ(c.distance[2], 2u);
  EXPECT_EQ(c.sigma[2], 2.0);

  const std::vector<Edge> two = {{0, 1}, {2, 3}};
  const auto u = shortest_paths(Graph(4, two), 0);
  EXPECT_EQ(u.distance[3], kUnreachable);
  EXPECT_EQ(u.sigma[3], 0.0);

  EXPECT_THROW(shortest_paths(Graph(2), 5), InvalidArgument);
}

TEST(DistanceMatrix, SymmetricAndMatchesFloyd) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto g = testing_support::random_graph(rng, 1 + uniform_index(rng, 20), 0.2);
    const auto m = distance_matrix(g);
    const auto fw = testing_support::floyd_warshall(g);
    for (std::size_t i = 0; i < g.capacity(); ++i) {
      EXPECT_EQ(m.d[i][i], 0u);
      for (std::size_t j = 0; j < g.capacity(); ++j) {
        EXPECT_EQ(m.d[i][j], m.d[j][i]);
        EXPECT_EQ(fw[i][j] < 0 ? kUnreachable : static_cast<std::size_t>(fw[i][j]), m.d[i][j]);
        if (m.d[i][j] != kUnreachable) {
          EXPECT_GE(m.sigma[i][j], 1.0);
        }
      }
    }
  }
}

TEST(Graph, RejectsSelfLoopsAndDedups) {
  const std::vector<Edge> loop = {{1, 1}};
  EXPECT_THROW(Graph(2, loop), InvalidArgument);
  const std::vector<Edge> dup = {{0, 1}, {1, 0}};
  EXPECT_EQ(Graph(2, dup).edge_count(), 1u);
}

TEST(Export, EdgeListsAndSummary) {
  const auto net = g0();
  std::ostringstream b, p;
  write_edge_list(b, net);
  EXPECT_EQ(b.str(), "B1 F1 100\nB1 F2 50\nB2 F2 200\n");
  write_edge_list(p, project_firms(net));
  EXPECT_EQ(p.str(), "F1 F2\n");
  const auto j = summary_json(net);
  EXPECT_EQ(j.dump(), R"({"period":2003,"n_institutions":2,"n_firms":2,"M":3,"total_weight":350.0})");
}
