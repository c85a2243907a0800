#pragma once

// Seeded synthetic loan ledgers: per period a bipartite configuration model
// with truncated discrete power-law degrees and Pareto loan amounts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "creditnet/error.hpp"
#include "creditnet/ingest.hpp"
#include "creditnet/labels.hpp"
#include "creditnet/random.hpp"

namespace creditnet {

struct WeightedLabel {
  std::string label;
  double weight = 1.0;
};

struct SynthConfig {
  std::size_t n_institutions = 607;
  std::size_t n_firms = 1777;
  double alpha_institutions = 2.2;  // degree exponents
  double alpha_firms = 2.8;
  double mean_degree = 2.0;         // target mean firm degree
  double weight_shape = 1.5;        // Pareto tail index of loan amounts
  double weight_scale = 10.0;       // Pareto minimum loan amount
  int n_periods = 1;
  int first_period = 2000;
  std::uint64_t seed = 1;
  std::string currency = "CNY";
  std::vector<WeightedLabel> institution_types = {
      {"state-owned", 5},      {"policy", 3},  {"nationwide-joint-stock", 12}, {"urban-commercial", 150},
      {"rural-cooperative", 100}, {"foreign", 91}, {"trust-finance", 246}};
  std::vector<WeightedLabel> industries = {
      {"real-estate", 9},  {"manufacturing", 40}, {"energy", 8},       {"construction", 6},
      {"transport", 7},    {"mining", 5},         {"information", 6},  {"retail", 8},
      {"utilities", 5},    {"agriculture", 3},    {"services", 3}};
};

inline void validate(const SynthConfig& c) {
  if (c.n_institutions < 1 || c.n_firms < 1) throw InvalidArgument("side counts must be at least 1");
  if (!(c.alpha_institutions > 1.0) || !(c.alpha_firms > 1.0)) throw InvalidArgument("degree exponents must exceed 1");
  if (!(c.mean_degree >= 1.0)) throw InvalidArgument("mean degree must be at least 1");
  if (c.mean_degree > static_cast<double>(c.n_institutions)) {
    throw InvalidArgument("mean firm degree exceeds the number of institutions");
  }
  if (!(c.weight_shape > 0.0) || !(c.weight_scale > 0.0)) throw InvalidArgument("Pareto shape and scale must be positive");
  if (c.n_periods < 1) throw InvalidArgument("n_periods must be at least 1");
  for (const auto* vocab : {&c.institution_types, &c.industries}) {
    double total = 0.0;
    for (const auto& l : *vocab) {
      if (!(l.weight >= 0.0)) throw InvalidArgument("label weights must be non-negative");
      total += l.weight;
    }
    if (vocab->empty() || !(total > 0.0)) throw InvalidArgument("label vocabulary needs positive total weight");
  }
}

inline void from_json(const nlohmann::json& j, WeightedLabel& l) {
  if (j.is_string()) {
    l = {j.get<std::string>(), 1.0};
    return;
  }
  j.at("label").get_to(l.label);
  l.weight = j.value("weight", 1.0);
}

// Missing keys keep their defaults; unknown keys are rejected.
inline SynthConfig parse_synth_config(const nlohmann::json& j) {
  SynthConfig c;
  if (!j.is_object()) throw InvalidArgument("synth config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "n_institutions") c.n_institutions = value.get<std::size_t>();
      else if (key == "n_firms") c.n_firms = value.get<std::size_t>();
      else if (key == "alpha_institutions") c.alpha_institutions = value.get<double>();
      else if (key == "alpha_firms") c.alpha_firms = value.get<double>();
      else if (key == "mean_degree") c.mean_degree = value.get<double>();
      else if (key == "weight_shape") c.weight_shape = value.get<double>();
      else if (key == "weight_scale") c.weight_scale = value.get<double>();
      else if (key == "n_periods") c.n_periods = value.get<int>();
      else if (key == "first_period") c.first_period = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "currency") c.currency = value.get<std::string>();
      else if (key == "institution_types") c.institution_types = value.get<std::vector<WeightedLabel>>();
      else if (key == "industries") c.industries = value.get<std::vector<WeightedLabel>>();
      else throw InvalidArgument("unknown synth config key: " + key);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("synth config key '" + key + "': " + e.what());
    }
  }
  validate(c);
  return c;
}

inline SynthConfig parse_synth_config(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("synth config is not valid JSON: ") + e.what());
  }
  return parse_synth_config(j);
}

// P(k) proportional to k^-alpha on [kmin, kmax].
class TruncatedPowerLaw {
 public:
  TruncatedPowerLaw(double alpha, std::size_t kmin, std::size_t kmax) : kmin_(kmin) {
    if (kmin < 1 || kmax < kmin) throw InvalidArgument("bad power-law support");
    double acc = 0.0, first = 0.0;
    for (std::size_t k = kmin; k <= kmax; ++k) {
      const double p = std::pow(static_cast<double>(k), -alpha);
      acc += p;
      first += p * static_cast<double>(k);
      cdf_.push_back(acc);
    }
    mean_ = first / acc;
  }

  double mean() const noexcept { return mean_; }

  std::size_t operator()(Rng& rng) const {
    const double u = uniform01(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    return kmin_ + idx;
  }

 private:
  std::size_t kmin_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
};

// Lower cutoff whose truncated mean is closest to `target`.
inline TruncatedPowerLaw degree_law(double alpha, double target, std::size_t kmax) {
  TruncatedPowerLaw best(alpha, 1, kmax);
  for (std::size_t kmin = 2; kmin <= kmax; ++kmin) {
    TruncatedPowerLaw cand(alpha, kmin, kmax);
    if (std::abs(cand.mean() - target) >= std::abs(best.mean() - target)) break;
    best = std::move(cand);
  }
  return best;
}

// One period's stub matching before multi-edges collapse.
struct StubMatching {
  std::vector<std::size_t> institution_degrees;  // after trimming
  std::vector<std::size_t> firm_degrees;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (institution, firm), one per stub pair
};

inline StubMatching match_stubs(const SynthConfig& c, Rng& rng) {
  const double inst_target = c.mean_degree * static_cast<double>(c.n_firms) / static_cast<double>(c.n_institutions);
  const auto inst_law = degree_law(c.alpha_institutions, inst_target, c.n_firms);
  const auto firm_law = degree_law(c.alpha_firms, c.mean_degree, c.n_institutions);

  std::vector<std::size_t> inst_stubs, firm_stubs;
  for (std::size_t i = 0; i < c.n_institutions; ++i) inst_stubs.insert(inst_stubs.end(), inst_law(rng), i);
  for (std::size_t f = 0; f < c.n_firms; ++f) firm_stubs.insert(firm_stubs.end(), firm_law(rng), f);
  shuffle(inst_stubs, rng);
  shuffle(firm_stubs, rng);
  const std::size_t m = std::min(inst_stubs.size(), firm_stubs.size());
  inst_stubs.resize(m);  // shuffled, so truncation trims uniformly at random
  firm_stubs.resize(m);

  StubMatching s;
  s.institution_degrees.assign(c.n_institutions, 0);
  s.firm_degrees.assign(c.n_firms, 0);
  for (std::size_t k = 0; k < m; ++k) {
    ++s.institution_degrees[inst_stubs[k]];
    ++s.firm_degrees[firm_stubs[k]];
    s.pairs.emplace_back(inst_stubs[k], firm_stubs[k]);
  }
  return s;
}

namespace detail {

inline std::string padded(char prefix, std::size_t i, std::size_t n) {
  const int width = static_cast<int>(std::to_string(n).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i + 1);
  return buf;
}

inline const std::string& pick_label(const std::vector<WeightedLabel>& vocab, Rng& rng) {
  double total = 0.0;
  for (const auto& l : vocab) total += l.weight;
  double u = uniform01(rng) * total;
  for (const auto& l : vocab) {
    if (u < l.weight) return l.label;
    u -= l.weight;
  }
  for (auto it = vocab.rbegin(); it != vocab.rend(); ++it) {
    if (it->weight > 0) return it->label;
  }
  return vocab.back().label;
}

}  // namespace detail

// Ledger rows ordered by (period, institution, firm). Labels are drawn once
// per entity; each period uses its own seed derived from config.seed.
inline std::vector<LoanRecord> generate(const SynthConfig& c) {
  validate(c);
  Rng label_rng(derive_seed(c.seed, 0xFFFF'FFFFULL));
  std::vector<std::string> inst_type, firm_industry;
  for (std::size_t i = 0; i < c.n_institutions; ++i) inst_type.push_back(detail::pick_label(c.institution_types, label_rng));
  for (std::size_t f = 0; f < c.n_firms; ++f) firm_industry.push_back(detail::pick_label(c.industries, label_rng));

  std::vector<LoanRecord> out;
  for (int t = 0; t < c.n_periods; ++t) {
    Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(t)));
    const auto stubs = match_stubs(c, rng);
    std::map<std::pair<std::size_t, std::size_t>, double> loans;
    for (const auto& p : stubs.pairs) {
      const double w = std::round(pareto(rng, c.weight_scale, c.weight_shape + 1.0) * 100.0) / 100.0;
      double& acc = loans[p];
      acc = std::round((acc + std::max(w, 0.01)) * 100.0) / 100.0;
    }
    for (const auto& [p, w] : loans) {
      const auto [i, f] = p;
      LoanRecord r;
      r.period = c.first_period + t;
      r.lender_id = detail::padded('B', i, c.n_institutions);
      r.lender_name = "Institution " + r.lender_id.substr(1);
      r.lender_type = inst_type[i];
      r.borrower_id = detail::padded('F', f, c.n_firms);
      r.borrower_name = "Firm " + r.borrower_id.substr(1);
      r.borrower_industry = firm_industry[f];
      r.amount = w;
      r.currency = c.currency;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace creditnet
