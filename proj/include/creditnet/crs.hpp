#pragma once

// Credit Risk Score: two-wave feedback propagation of a single simulated
// default through credit-share weights, plus the capital-floor rules.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "creditnet/bipartite.hpp"
#include "creditnet/csv.hpp"
#include "creditnet/error.hpp"
#include "creditnet/ingest.hpp"
#include "creditnet/topology.hpp"

namespace creditnet {

// Risk diffusion weights. A receiver's contamination from a neighbor is the
// neighbor's share of the receiver's own credit:
//   toward institution i from firm k: C_ik / C_Bi
//   toward firm k from institution i: C_ik / C_Fk
class RiskDiffusion {
 public:
  explicit RiskDiffusion(const BipartiteCreditNetwork& net) : net_(&net) {}

  double toward_institution(std::size_t institution, std::size_t firm) const {
    return net_->weight(institution, firm) / net_->lending_total(institution);
  }
  double toward_firm(std::size_t firm, std::size_t institution) const {
    return net_->weight(institution, firm) / net_->borrowing_total(firm);
  }

 private:
  const BipartiteCreditNetwork* net_;
};

struct RiskState {
  Vertex origin = 0;
  std::vector<double> gamma_institutions;
  std::vector<double> gamma_firms;
  double risk_b = 0.0;
  double risk_f = 0.0;
  double crs = 0.0;
  bool clamped = false;  // some contamination exceeded 1 before clamping
};

struct PropagationOptions {
  double shock = 1.0;  // initial contamination of the origin, in (0, 1]
};

// Origin's neighbors receive shock * (their exposure share to the origin);
// the second wave passes first-wave contamination on to the origin's side
// (origin excluded). No further waves.
inline RiskState propagate_default(const BipartiteCreditNetwork& net, Vertex origin,
                                   const PropagationOptions& opt = {}) {
  if (origin >= net.vertex_count()) throw InvalidArgument("origin vertex out of range");
  if (!(opt.shock > 0.0 && opt.shock <= 1.0)) throw InvalidArgument("shock must lie in (0, 1]");
  if (net.degree(origin) == 0) throw InvalidArgument("isolated origin " + net.key(origin).id + ": no diffusion defined");

  RiskState s;
  s.origin = origin;
  s.gamma_institutions.assign(net.institution_count(), 0.0);
  s.gamma_firms.assign(net.firm_count(), 0.0);
  auto clamp = [&](double g) {
    if (g > 1.0) {
      s.clamped = true;
      return 1.0;
    }
    return g;
  };

  const auto [side, idx] = net.locate(origin);
  if (side == Side::Institution) {
    s.gamma_institutions[idx] = opt.shock;
    for (const auto& l : net.lending(idx)) {
      s.gamma_firms[l.other] = clamp(l.weight / net.borrowing_total(l.other) * opt.shock);
    }
    std::vector<double> second(net.institution_count(), 0.0);
    for (const auto& l : net.lending(idx)) {
      for (const auto& back : net.borrowing(l.other)) {
        if (back.other == idx) continue;
        second[back.other] += back.weight / net.lending_total(back.other) * s.gamma_firms[l.other];
      }
    }
    for (std::size_t j = 0; j < second.size(); ++j) {
      if (j != idx) s.gamma_institutions[j] = clamp(second[j]);
    }
  } else {
    s.gamma_firms[idx] = opt.shock;
    for (const auto& l : net.borrowing(idx)) {
      s.gamma_institutions[l.other] = clamp(l.weight / net.lending_total(l.other) * opt.shock);
    }
    std::vector<double> second(net.firm_count(), 0.0);
    for (const auto& l : net.borrowing(idx)) {
      for (const auto& fwd : net.lending(l.other)) {
        if (fwd.other == idx) continue;
        second[fwd.other] += fwd.weight / net.borrowing_total(fwd.other) * s.gamma_institutions[l.other];
      }
    }
    for (std::size_t k = 0; k < second.size(); ++k) {
      if (k != idx) s.gamma_firms[k] = clamp(second[k]);
    }
  }

  double wb = 0, tb = 0, wf = 0, tf = 0;
  for (std::size_t i = 0; i < net.institution_count(); ++i) {
    wb += net.lending_total(i) * s.gamma_institutions[i];
    tb += net.lending_total(i);
  }
  for (std::size_t k = 0; k < net.firm_count(); ++k) {
    wf += net.borrowing_total(k) * s.gamma_firms[k];
    tf += net.borrowing_total(k);
  }
  s.risk_b = wb / tb;
  s.risk_f = wf / tf;
  s.crs = s.risk_b + s.risk_f;
  return s;
}

struct CrsEntry {
  VertexKey key;
  Vertex vertex = 0;
  double crs = 0.0;
  double risk_b = 0.0;
  double risk_f = 0.0;
};

// CRS for every non-isolated vertex, descending; ties by (side, id).
inline std::vector<CrsEntry> crs_all(const BipartiteCreditNetwork& net, const PropagationOptions& opt = {}) {
  std::vector<CrsEntry> out;
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    if (net.degree(v) == 0) continue;
    const auto s = propagate_default(net, v, opt);
    out.push_back({net.key(v), v, s.crs, s.risk_b, s.risk_f});
  }
  std::sort(out.begin(), out.end(), [](const CrsEntry& a, const CrsEntry& b) {
    if (a.crs != b.crs) return a.crs > b.crs;
    return a.key < b.key;
  });
  return out;
}

enum class GroupAttribute { LenderType, BorrowerIndustry };

// Mean CRS per label. Institutions are grouped by type, firms by industry;
// the attribute picks which side of the ranking is aggregated.
inline std::map<std::string, double> group_average_crs(const BipartiteCreditNetwork& net,
                                                       std::span<const CrsEntry> ranking, GroupAttribute attr) {
  std::vector<double> values;
  std::vector<std::string> labels;
  for (const auto& e : ranking) {
    auto [side, idx] = net.locate(e.vertex);
    if (attr == GroupAttribute::LenderType && side == Side::Institution) {
      values.push_back(e.crs);
      labels.push_back(net.institutions()[idx].type);
    } else if (attr == GroupAttribute::BorrowerIndustry && side == Side::Firm) {
      values.push_back(e.crs);
      labels.push_back(net.firms()[idx].industry);
    }
  }
  return aggregate_by_label(values, labels, Aggregation::Mean);
}

// Reserve floor from total exposure: max(c_prev, theta * L_prev).
inline double capital_floor(double c_prev, double theta, double exposure_prev) {
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  if (c_prev < 0 || exposure_prev < 0) throw InvalidArgument("capital and exposure must be non-negative");
  return std::max(c_prev, theta * exposure_prev);
}

// Reserve floor from the largest single credit edge: max(c_prev, E / theta).
inline double capital_exposure_floor(double c_prev, double theta, double max_edge) {
  if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
  if (c_prev < 0 || max_edge < 0) throw InvalidArgument("capital and exposure must be non-negative");
  return std::max(c_prev, max_edge / theta);
}

struct ThetaEntry {
  int period = 0;
  std::string entity;
  double theta = 0.0;
};

// Header row "period,entity,theta".
inline std::vector<ThetaEntry> parse_theta_schedule(std::istream& in) {
  std::string line;
  std::size_t row = 1;
  if (!csv::read_line(in, line)) throw ParseError(row, "<header>", "empty theta schedule");
  auto header = csv::split(line);
  if (!header || header->size() != 3 || csv::trim((*header)[0]) != "period" ||
      csv::trim((*header)[1]) != "entity" || csv::trim((*header)[2]) != "theta") {
    throw ParseError(row, "<header>", "expected 'period,entity,theta'");
  }
  std::vector<ThetaEntry> out;
  while (csv::read_line(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    auto f = csv::split(line);
    if (!f || f->size() != 3) throw ParseError(row, "<row>", "expected 3 fields");
    ThetaEntry e;
    if (!detail::parse_number((*f)[0], e.period)) throw ParseError(row, "period", "not an integer");
    e.entity = std::string(csv::trim((*f)[1]));
    if (!detail::parse_number((*f)[2], e.theta)) throw ParseError(row, "theta", "not a number");
    if (!(e.theta > 0.0 && e.theta <= 1.0)) throw ParseError(row, "theta", "must lie in (0, 1]");
    out.push_back(std::move(e));
  }
  return out;
}

struct PolicyRow {
  int period = 0;
  VertexKey entity;
  double theta = 0.0;
  double exposure_prev = 0.0;  // total credit of the entity in period - 1
  double max_edge_prev = 0.0;  // largest single credit edge in period - 1
  double capital_floor = 0.0;
  double exposure_floor = 0.0;
};

// Evaluates both capital floors along each entity's schedule. The previous
// capital of an entity's first scheduled period is 0; later rows chain from
// the floor computed for the entity's preceding scheduled row. Entities are
// resolved by id, institutions first.
inline std::vector<PolicyRow> capital_policy(const std::map<int, BipartiteCreditNetwork>& networks,
                                             std::vector<ThetaEntry> schedule) {
  std::stable_sort(schedule.begin(), schedule.end(), [](const ThetaEntry& a, const ThetaEntry& b) {
    return a.entity != b.entity ? a.entity < b.entity : a.period < b.period;
  });
  auto resolve_side = [&](const std::string& id) -> Side {
    bool inst = false, firm = false;
    for (const auto& [period, net] : networks) {
      inst = inst || net.find_institution(id).has_value();
      firm = firm || net.find_firm(id).has_value();
    }
    if (inst && firm) throw InvalidArgument("entity id '" + id + "' names both an institution and a firm");
    if (!inst && !firm) throw InvalidArgument("unknown entity '" + id + "' in theta schedule");
    return inst ? Side::Institution : Side::Firm;
  };

  std::vector<PolicyRow> out;
  std::map<std::string, std::pair<double, double>> carried;  // entity -> (capital, exposure) floors
  for (const auto& e : schedule) {
    PolicyRow r;
    r.period = e.period;
    r.entity = {resolve_side(e.entity), e.entity};
    r.theta = e.theta;
    if (auto it = networks.find(e.period - 1); it != networks.end()) {
      const auto& net = it->second;
      if (auto v = net.find(r.entity)) {
        auto [side, idx] = net.locate(*v);
        auto links = side == Side::Institution ? net.lending(idx) : net.borrowing(idx);
        for (const auto& l : links) {
          r.exposure_prev += l.weight;
          r.max_edge_prev = std::max(r.max_edge_prev, l.weight);
        }
      }
    }
    auto [prev_capital, prev_exposure] = carried.try_emplace(e.entity, 0.0, 0.0).first->second;
    r.capital_floor = capital_floor(prev_capital, e.theta, r.exposure_prev);
    r.exposure_floor = capital_exposure_floor(prev_exposure, e.theta, r.max_edge_prev);
    carried[e.entity] = {r.capital_floor, r.exposure_floor};
    out.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::ordered_json to_json(std::span<const PolicyRow> rows) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j.push_back({{"period", r.period},
                 {"entity", r.entity.id},
                 {"side", side_name(r.entity.side)},
                 {"theta", r.theta},
                 {"exposure_prev", r.exposure_prev},
                 {"max_edge_prev", r.max_edge_prev},
                 {"capital_floor", r.capital_floor},
                 {"exposure_floor", r.exposure_floor}});
  }
  return j;
}

inline const std::vector<std::string>& crs_csv_header() {
  static const std::vector<std::string> h = {"period", "vertex", "side", "CRS", "Risk_B", "Risk_F"};
  return h;
}

inline void write_crs_rows(csv::Writer& w, int period, std::span<const CrsEntry> ranking) {
  for (const auto& e : ranking) {
    w.row({std::to_string(period), e.key.id, std::string(side_name(e.key.side)), csv::format_double(e.crs),
           csv::format_double(e.risk_b), csv::format_double(e.risk_f)});
  }
}

}  // namespace creditnet
