#pragma once

// Entity fixed-effect panel regression of CRS on vertex topology with
// period effects and one-period lags, and the log-linear growth fit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "creditnet/error.hpp"

namespace creditnet {

enum class Regressor { Degree, Strength, Betweenness, Closeness, DegreeLag, StrengthLag };

inline std::string_view regressor_name(Regressor r) {
  switch (r) {
    case Regressor::Degree: return "Degree";
    case Regressor::Strength: return "Strength";
    case Regressor::Betweenness: return "Betweenness";
    case Regressor::Closeness: return "Closeness";
    case Regressor::DegreeLag: return "Degree_Lag";
    case Regressor::StrengthLag: return "Strength_Lag";
  }
  return "?";
}

// One entity's topology in one period.
struct EntityMetrics {
  std::string entity;
  double degree = 0.0;
  double strength = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
};

struct PanelRow {
  std::string entity;
  int period = 0;
  double crs = 0.0;
  double degree = 0.0;
  double strength = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
  std::optional<double> degree_lag;  // absent unless observed in period - 1
  std::optional<double> strength_lag;

  std::optional<double> value(Regressor r) const {
    switch (r) {
      case Regressor::Degree: return degree;
      case Regressor::Strength: return strength;
      case Regressor::Betweenness: return betweenness;
      case Regressor::Closeness: return closeness;
      case Regressor::DegreeLag: return degree_lag;
      case Regressor::StrengthLag: return strength_lag;
    }
    return std::nullopt;
  }

  friend bool operator==(const PanelRow&, const PanelRow&) = default;
};

struct PanelDataset {
  std::vector<PanelRow> rows;  // sorted by (entity, period)
};

// Inner join of metric and CRS tables on (entity, period). Lags come from
// the entity's metrics in the immediately preceding period.
inline PanelDataset build_panel(const std::map<int, std::vector<EntityMetrics>>& metrics,
                                const std::map<int, std::map<std::string, double>>& crs) {
  std::map<std::pair<std::string, int>, const EntityMetrics*> index;
  for (const auto& [period, table] : metrics) {
    for (const auto& m : table) {
      if (!index.emplace(std::pair{m.entity, period}, &m).second) {
        throw InvalidArgument("duplicate (entity, period) in metrics: " + m.entity + ", " + std::to_string(period));
      }
    }
  }
  PanelDataset panel;
  for (const auto& [key, m] : index) {
    const auto& [entity, period] = key;
    auto ct = crs.find(period);
    if (ct == crs.end()) continue;
    auto c = ct->second.find(entity);
    if (c == ct->second.end()) continue;
    PanelRow r{entity, period, c->second, m->degree, m->strength, m->betweenness, m->closeness, {}, {}};
    if (auto prev = index.find({entity, period - 1}); prev != index.end()) {
      r.degree_lag = prev->second->degree;
      r.strength_lag = prev->second->strength;
    }
    panel.rows.push_back(std::move(r));
  }
  return panel;
}

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
};

struct RegressionResult {
  std::vector<Coefficient> coefficients;  // requested regressors that survived
  std::vector<std::string> dropped;       // collinear with the fixed effects or each other
  std::size_t n = 0;
  std::size_t entities = 0;
  std::size_t periods = 0;
  std::size_t dof = 0;
  double r2_within = 0.0;
  double adj_r2 = 0.0;

  const Coefficient* find(std::string_view name) const {
    for (const auto& c : coefficients) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

struct PeriodRange {
  int first = std::numeric_limits<int>::min();
  int last = std::numeric_limits<int>::max();
};

// Within estimator: entity-demeaned OLS with period indicator columns (first
// period omitted), homoskedastic standard errors. Rows missing any requested
// regressor are dropped, as are entities left with a single observation.
// Adjusted R^2 = 1 - (RSS / dof) / (TSS_within / (N - G)), dof = N - G - K.
inline RegressionResult fit_fixed_effects(const PanelDataset& panel, std::span<const Regressor> regressors,
                                          PeriodRange range = {}) {
  std::vector<const PanelRow*> rows;
  for (const auto& r : panel.rows) {
    if (r.period < range.first || r.period > range.last) continue;
    bool complete = true;
    for (auto reg : regressors) complete = complete && r.value(reg).has_value();
    if (complete) rows.push_back(&r);
  }
  std::map<std::string, std::size_t> count;
  for (const auto* r : rows) ++count[r->entity];
  std::erase_if(rows, [&](const PanelRow* r) { return count[r->entity] < 2; });
  std::map<std::string, std::size_t> entity_index;
  std::map<int, std::size_t> period_index;
  for (const auto* r : rows) {
    entity_index.try_emplace(r->entity, entity_index.size());
    period_index.try_emplace(r->period, 0);
  }
  if (entity_index.size() < 2) throw InvalidArgument("fixed effects need at least two entities with two observations");
  {
    std::size_t k = 0;
    for (auto& [p, idx] : period_index) idx = k++;
  }

  const std::size_t n = rows.size();
  const std::size_t g = entity_index.size();
  const std::size_t n_dummies = period_index.size() - 1;
  const std::size_t cols = n_dummies + regressors.size();

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  std::vector<std::size_t> group(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = *rows[i];
    const auto ii = static_cast<Eigen::Index>(i);
    group[i] = entity_index.at(r.entity);
    y(ii) = r.crs;
    const std::size_t p = period_index.at(r.period);
    if (p > 0) x(ii, static_cast<Eigen::Index>(p - 1)) = 1.0;
    for (std::size_t k = 0; k < regressors.size(); ++k) {
      x(ii, static_cast<Eigen::Index>(n_dummies + k)) = *r.value(regressors[k]);
    }
  }

  auto demean = [&](auto&& col) {
    std::vector<double> sum(g, 0.0);
    std::vector<double> cnt(g, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[group[i]] += col(static_cast<Eigen::Index>(i));
      cnt[group[i]] += 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) col(static_cast<Eigen::Index>(i)) -= sum[group[i]] / cnt[group[i]];
  };
  demean(y);
  for (Eigen::Index c = 0; c < x.cols(); ++c) demean(x.col(c));

  // Greedy column screening in order (period effects first) by Gram-Schmidt
  // residual norm relative to the column's own norm.
  std::vector<Eigen::Index> kept;
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), 0);
  RegressionResult res;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::VectorXd v = x.col(c);
    const double norm = v.norm();
    for (int pass = 0; pass < 2 && basis.cols() > 0; ++pass) v -= basis * (basis.transpose() * v);
    const bool independent = norm > 0 && v.norm() > 1e-9 * norm;
    if (independent) {
      kept.push_back(c);
      basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
      basis.col(basis.cols() - 1) = v / v.norm();
    } else if (static_cast<std::size_t>(c) >= n_dummies) {
      res.dropped.emplace_back(regressor_name(regressors[static_cast<std::size_t>(c) - n_dummies]));
    }
  }

  const std::size_t k = kept.size();
  if (n <= g + k) throw InvalidArgument("too few observations for the fixed-effect model");
  Eigen::MatrixXd xk(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) xk.col(static_cast<Eigen::Index>(j)) = x.col(kept[j]);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  Eigen::MatrixXd xtx_inv = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  if (k > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xk);
    beta = qr.solve(y);
    const Eigen::MatrixXd xtx = xk.transpose() * xk;
    xtx_inv = xtx.ldlt().solve(Eigen::MatrixXd::Identity(xtx.rows(), xtx.cols()));
  }
  const Eigen::VectorXd resid = y - xk * beta;
  const double rss = resid.squaredNorm();
  const double tss = y.squaredNorm();
  res.n = n;
  res.entities = g;
  res.periods = period_index.size();
  res.dof = n - g - k;
  const double sigma2 = rss / static_cast<double>(res.dof);
  res.r2_within = tss > 0 ? 1.0 - rss / tss : 1.0;
  res.adj_r2 = tss > 0 ? 1.0 - sigma2 / (tss / static_cast<double>(n - g)) : 1.0;

  const boost::math::students_t tdist(static_cast<double>(res.dof));
  for (std::size_t j = 0; j < k; ++j) {
    if (static_cast<std::size_t>(kept[j]) < n_dummies) continue;
    const auto jj = static_cast<Eigen::Index>(j);
    Coefficient c;
    c.name = regressor_name(regressors[static_cast<std::size_t>(kept[j]) - n_dummies]);
    c.estimate = beta(jj);
    c.std_error = std::sqrt(std::max(0.0, sigma2 * xtx_inv(jj, jj)));
    c.t_stat = c.std_error > 0 ? c.estimate / c.std_error : 0.0;
    c.p_value = c.std_error > 0 ? 2.0 * boost::math::cdf(boost::math::complement(tdist, std::abs(c.t_stat))) : 1.0;
    res.coefficients.push_back(std::move(c));
  }
  return res;
}

// OLS slope of ln(value) on period.
inline double fit_exponential_trend(std::span<const std::pair<int, double>> series) {
  if (series.size() < 3) throw InvalidArgument("exponential trend needs at least three points");
  double mt = 0, my = 0;
  for (const auto& [t, v] : series) {
    if (!(v > 0)) throw InvalidArgument("exponential trend needs positive values");
    mt += t;
    my += std::log(v);
  }
  const double n = static_cast<double>(series.size());
  mt /= n;
  my /= n;
  double sty = 0, stt = 0;
  for (const auto& [t, v] : series) {
    const double dt = t - mt;
    sty += dt * (std::log(v) - my);
    stt += dt * dt;
  }
  if (stt == 0) throw InvalidArgument("exponential trend needs at least two distinct periods");
  return sty / stt;
}

struct PanelModel {
  std::string label;
  std::vector<Regressor> regressors;
  PeriodRange range;
};

// The three-column layout: base, with lags, and the with-lags model refit
// from `post_from` onward.
inline std::vector<PanelModel> standard_models(int post_from) {
  using R = Regressor;
  const std::vector<R> base = {R::Degree, R::Strength, R::Betweenness, R::Closeness};
  std::vector<R> lags = base;
  lags.push_back(R::DegreeLag);
  lags.push_back(R::StrengthLag);
  return {{"(1)", base, {}}, {"(2)", lags, {}}, {"(3)", lags, {post_from, std::numeric_limits<int>::max()}}};
}

inline std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

// Aligned text table; a missing model column holds the error message.
inline std::string regression_table(const std::string& dependent, const std::vector<PanelModel>& models,
                                    const std::vector<std::optional<RegressionResult>>& results) {
  const std::vector<std::string> names = {"Degree",    "Strength",   "Betweenness",
                                          "Closeness", "Degree_Lag", "Strength_Lag"};
  std::vector<std::vector<std::string>> cells;
  auto fmt = [](double v) {
    std::ostringstream os;
    os << std::setprecision(5) << v;
    return os.str();
  };
  cells.push_back({"Dependent: " + dependent});
  for (const auto& m : models) cells.back().push_back(m.label);
  for (const auto& name : names) {
    std::vector<std::string> row = {name};
    for (const auto& r : results) {
      const Coefficient* c = r ? r->find(name) : nullptr;
      row.push_back(c ? fmt(c->estimate) + significance_stars(c->p_value) + " (" + fmt(c->t_stat) + ")" : "-");
    }
    cells.push_back(std::move(row));
  }
  std::vector<std::string> te = {"Time Effect"}, nn = {"N"}, r2 = {"Adj. R-Squared"};
  for (const auto& r : results) {
    te.push_back("Yes");
    nn.push_back(r ? std::to_string(r->n) : "-");
    r2.push_back(r ? fmt(r->adj_r2) : "-");
  }
  cells.push_back(te);
  cells.push_back(nn);
  cells.push_back(r2);

  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
    }
    os << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json to_json(const RegressionResult& r) {
  nlohmann::ordered_json j;
  auto coefs = nlohmann::ordered_json::object();
  for (const auto& c : r.coefficients) {
    coefs[c.name] = {{"estimate", c.estimate}, {"std_error", c.std_error}, {"t", c.t_stat}, {"p", c.p_value}};
  }
  j["coefficients"] = coefs;
  j["dropped"] = r.dropped;
  j["time_effect"] = true;
  j["N"] = r.n;
  j["entities"] = r.entities;
  j["periods"] = r.periods;
  j["r2_within"] = r.r2_within;
  j["adj_r2"] = r.adj_r2;
  return j;
}

}  // namespace creditnet
