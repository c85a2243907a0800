#pragma once

// Shared fixtures, generators and brute-force oracles for the test suites.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "creditnet/creditnet.hpp"

namespace cn = creditnet;

namespace testing_support {

// G0: B1->F1 100, B1->F2 50, B2->F2 200.
inline std::vector<cn::LoanRecord> g0_records(int period = 2003) {
  auto rec = [&](std::string lid, std::string ltype, std::string bid, std::string ind, double amount) {
    cn::LoanRecord r;
    r.period = period;
    r.lender_id = lid;
    r.lender_name = "Bank" + lid;
    r.lender_type = ltype;
    r.borrower_id = bid;
    r.borrower_name = "Firm" + bid;
    r.borrower_industry = ind;
    r.amount = amount;
    r.currency = "CNY";
    return r;
  };
  return {rec("B1", "trust-finance", "F1", "manufacturing", 100), rec("B1", "trust-finance", "F2", "real-estate", 50),
          rec("B2", "state-owned", "F2", "real-estate", 200)};
}

inline cn::BipartiteCreditNetwork g0() {
  const auto r = g0_records();
  return cn::build_bipartite(r);
}

inline cn::Vertex vid(const cn::BipartiteCreditNetwork& net, cn::Side side, const std::string& id) {
  return *net.find({side, id});
}

// Each institution-firm pair linked with probability p, integer weights in
// [1, max_weight].
inline cn::BipartiteCreditNetwork random_network(cn::Rng& rng, std::size_t nb, std::size_t nf, double p,
                                                 int max_weight = 100, int period = 2000) {
  std::vector<cn::InstitutionInfo> inst;
  std::vector<cn::FirmInfo> firms;
  for (std::size_t i = 0; i < nb; ++i) {
    inst.push_back({"B" + std::to_string(1000 + i), "b", i % 2 ? "policy" : "foreign"});
  }
  for (std::size_t f = 0; f < nf; ++f) {
    firms.push_back({"F" + std::to_string(1000 + f), "f", f % 3 ? "energy" : "mining"});
  }
  std::vector<cn::CreditEdge> edges;
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t f = 0; f < nf; ++f) {
      if (cn::uniform01(rng) < p) {
        edges.push_back({i, f, 1.0 + static_cast<double>(cn::uniform_index(rng, static_cast<std::uint64_t>(max_weight)))});
      }
    }
  }
  return {period, inst, firms, edges};
}

// Ledger view of a network: one record per edge. Rebuilding from it drops
// isolated vertices, as any ledger-built network has none.
inline std::vector<cn::LoanRecord> to_records(const cn::BipartiteCreditNetwork& net) {
  std::vector<cn::LoanRecord> out;
  for (const auto& e : net.edges()) {
    const auto& b = net.institutions()[e.institution];
    const auto& f = net.firms()[e.firm];
    cn::LoanRecord r;
    r.period = net.period();
    r.lender_id = b.id;
    r.lender_name = b.name;
    r.lender_type = b.type;
    r.borrower_id = f.id;
    r.borrower_name = f.name;
    r.borrower_industry = f.industry;
    r.amount = e.weight;
    r.currency = "CNY";
    out.push_back(std::move(r));
  }
  return out;
}

inline cn::BipartiteCreditNetwork without_isolated(const cn::BipartiteCreditNetwork& net) {
  const auto r = to_records(net);
  return cn::build_bipartite(r);
}

inline cn::Graph random_graph(cn::Rng& rng, std::size_t n, double p) {
  std::vector<cn::Edge> edges;
  for (cn::Vertex u = 0; u < n; ++u) {
    for (cn::Vertex v = u + 1; v < n; ++v) {
      if (cn::uniform01(rng) < p) edges.push_back({u, v});
    }
  }
  return cn::Graph(n, edges);
}

// Random labeled tree on n vertices (each vertex attaches to an earlier one).
inline cn::Graph random_tree(cn::Rng& rng, std::size_t n) {
  std::vector<cn::Edge> edges;
  for (cn::Vertex v = 1; v < n; ++v) edges.push_back({cn::uniform_index(rng, v), v});
  return cn::Graph(n, edges);
}

// Floyd-Warshall hop distances; -1 when unreachable.
inline std::vector<std::vector<long>> floyd_warshall(const cn::Graph& g) {
  const std::size_t n = g.capacity();
  constexpr long inf = 1L << 40;
  std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  for (auto& row : d) {
    for (auto& x : row) {
      if (x >= inf) x = -1;
    }
  }
  return d;
}

using Rational = boost::multiprecision::cpp_rational;

// Betweenness by explicit enumeration of every shortest path between every
// unordered pair, in exact rational arithmetic.
inline std::vector<Rational> enumerated_betweenness(const cn::Graph& g) {
  const auto d = floyd_warshall(g);
  const std::size_t n = g.capacity();
  std::vector<Rational> score(n, Rational(0));
  for (cn::Vertex s = 0; s < n; ++s) {
    for (cn::Vertex t = s + 1; t < n; ++t) {
      if (d[s][t] < 2) continue;
      long paths = 0;
      std::vector<long> through(n, 0);
      std::vector<cn::Vertex> stack = {s};
      std::function<void(cn::Vertex)> walk = [&](cn::Vertex u) {
        if (u == t) {
          ++paths;
          for (std::size_t k = 1; k + 1 < stack.size(); ++k) ++through[stack[k]];
          return;
        }
        for (cn::Vertex w : g.neighbors(u)) {
          if (d[w][t] == d[u][t] - 1) {
            stack.push_back(w);
            walk(w);
            stack.pop_back();
          }
        }
      };
      walk(s);
      for (cn::Vertex k = 0; k < n; ++k) {
        if (through[k]) score[k] += Rational(through[k], paths);
      }
    }
  }
  return score;
}

// Dense credit matrix C (institutions x firms).
inline Eigen::MatrixXd credit_matrix(const cn::BipartiteCreditNetwork& net) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(net.institution_count()),
                                            static_cast<Eigen::Index>(net.firm_count()));
  for (const auto& e : net.edges()) c(static_cast<Eigen::Index>(e.institution), static_cast<Eigen::Index>(e.firm)) = e.weight;
  return c;
}

struct OracleRisk {
  Eigen::VectorXd gamma_b, gamma_f;
  double risk_b = 0, risk_f = 0;
};

// Wave propagation by dense matrix products. waves = 2 is the model; waves = 3
// adds one more hop back to the other side.
inline OracleRisk matrix_oracle(const cn::BipartiteCreditNetwork& net, cn::Vertex origin, int waves = 2) {
  const Eigen::MatrixXd c = credit_matrix(net);
  const Eigen::VectorXd cb = c.rowwise().sum();
  const Eigen::VectorXd cf = c.colwise().sum().transpose();
  Eigen::MatrixXd to_b = c, to_f = c.transpose();  // to_b(i,k) = C_ik/C_Bi; to_f(k,i) = C_ik/C_Fk
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    if (cb(i) > 0) to_b.row(i) /= cb(i);
  }
  for (Eigen::Index k = 0; k < c.cols(); ++k) {
    if (cf(k) > 0) to_f.row(k) /= cf(k);
  }
  OracleRisk r;
  r.gamma_b = Eigen::VectorXd::Zero(c.rows());
  r.gamma_f = Eigen::VectorXd::Zero(c.cols());
  const auto [side, idx] = net.locate(origin);
  const auto o = static_cast<Eigen::Index>(idx);
  if (side == cn::Side::Institution) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(c.rows());
    e(o) = 1;
    r.gamma_f = to_f * e;
    r.gamma_b = to_b * r.gamma_f;
    r.gamma_b(o) = 1;
    if (waves >= 3) {
      Eigen::VectorXd third = to_f * r.gamma_b;
      r.gamma_f = r.gamma_f.cwiseMax(third);
    }
  } else {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(c.cols());
    e(o) = 1;
    r.gamma_b = to_b * e;
    r.gamma_f = to_f * r.gamma_b;
    r.gamma_f(o) = 1;
    if (waves >= 3) {
      Eigen::VectorXd third = to_b * r.gamma_f;
      r.gamma_b = r.gamma_b.cwiseMax(third);
    }
  }
  r.gamma_b = r.gamma_b.cwiseMin(1.0);
  r.gamma_f = r.gamma_f.cwiseMin(1.0);
  r.risk_b = cb.dot(r.gamma_b) / cb.sum();
  r.risk_f = cf.dot(r.gamma_f) / cf.sum();
  return r;
}

// Normalized mutual information, I / sqrt(H1 H2); 1 when both partitions
// are trivial.
inline double nmi(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const double n = static_cast<double>(a.size());
  std::map<std::size_t, double> pa, pb;
  std::map<std::pair<std::size_t, std::size_t>, double> pab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa[a[i]] += 1 / n;
    pb[b[i]] += 1 / n;
    pab[{a[i], b[i]}] += 1 / n;
  }
  double ha = 0, hb = 0, mi = 0;
  for (auto [k, p] : pa) ha -= p * std::log(p);
  for (auto [k, p] : pb) hb -= p * std::log(p);
  for (auto [k, p] : pab) mi += p * std::log(p / (pa[k.first] * pb[k.second]));
  if (ha == 0 && hb == 0) return 1.0;
  if (ha == 0 || hb == 0) return 0.0;
  return mi / std::sqrt(ha * hb);
}

// Two planted blocks of `per_side` institutions and `per_side` firms each.
// Vertex order: block-0 institutions, block-1 institutions, then firms.
inline cn::BipartiteCreditNetwork planted_blocks(cn::Rng& rng, std::size_t per_side, double p_in, double p_out) {
  std::vector<cn::InstitutionInfo> inst;
  std::vector<cn::FirmInfo> firms;
  for (std::size_t i = 0; i < 2 * per_side; ++i) inst.push_back({"B" + std::to_string(100 + i), "", "t"});
  for (std::size_t f = 0; f < 2 * per_side; ++f) firms.push_back({"F" + std::to_string(100 + f), "", "x"});
  std::vector<cn::CreditEdge> edges;
  for (std::size_t i = 0; i < 2 * per_side; ++i) {
    for (std::size_t f = 0; f < 2 * per_side; ++f) {
      const bool same = (i / per_side) == (f / per_side);
      if (cn::uniform01(rng) < (same ? p_in : p_out)) edges.push_back({i, f, 1.0});
    }
  }
  return {2000, inst, firms, edges};
}

inline std::vector<std::size_t> planted_labels(std::size_t per_side) {
  std::vector<std::size_t> labels;
  for (int side = 0; side < 2; ++side) {
    for (std::size_t i = 0; i < 2 * per_side; ++i) labels.push_back(i / per_side);
  }
  return labels;
}

}  // namespace testing_support
