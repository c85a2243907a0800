// creditnet: command-line pipeline over loan ledgers.
//
//   creditnet synth --config c.json --out d/
//   creditnet crs --in d/ --out d/
//
// Every tabular output is CSV with a header row; logs go to stderr.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "creditnet/creditnet.hpp"

namespace fs = std::filesystem;
using namespace creditnet;

namespace {

struct Options {
  std::string in;
  std::string out = ".";
  std::string config;
  std::string aliases;
  std::optional<int> from, to;
  std::string theta;
  double fraction = 0.05;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::string strategy = "both";
  std::string side = "institution";
  bool adaptive = false;
  std::size_t resamples = 0;
  std::size_t divisive_limit = DetectionOptions{}.divisive_edge_limit;
  std::optional<int> post_from;
  std::size_t top = 10;
};

void log(const std::string& msg) { std::cerr << "creditnet: " << msg << '\n'; }

std::string fmt(double v) { return csv::format_double(v); }

Side parse_side(const std::string& s) {
  if (s == "institution") return Side::Institution;
  if (s == "firm") return Side::Firm;
  throw InvalidArgument("unknown side '" + s + "' (expected institution or firm)");
}

class Output {
 public:
  Output(const Options& o, const std::string& name) : path_(fs::path(o.out) / name) {
    fs::create_directories(path_.parent_path());
    file_.open(path_, std::ios::binary);
    if (!file_) throw Error("cannot write " + path_.string());
  }
  ~Output() { log("wrote " + path_.string()); }

  std::ostream& stream() { return file_; }
  csv::Writer csv() { return csv::Writer(file_); }

 private:
  fs::path path_;
  std::ofstream file_;
};

fs::path ledger_path(const std::string& in) {
  if (in.empty()) throw InvalidArgument("--in is required");
  fs::path p(in);
  if (fs::is_directory(p)) p /= "ledger.csv";
  return p;
}

std::vector<LoanRecord> read_ledger(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error("cannot read " + p.string());
  try {
    return parse_loans(f);
  } catch (const Error& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

PreprocessResult load(const Options& o) {
  const auto path = ledger_path(o.in);
  auto records = read_ledger(path);
  AliasTable aliases;
  if (!o.aliases.empty()) {
    std::ifstream f(o.aliases, std::ios::binary);
    if (!f) throw Error("cannot read " + o.aliases);
    try {
      aliases = parse_aliases(f);
    } catch (const Error& e) {
      throw Error(o.aliases + ": " + e.what());
    }
  }
  auto result = preprocess(std::move(records), aliases);
  if (o.from || o.to) {
    result.records = restrict_window(std::move(result.records), o.from.value_or(std::numeric_limits<int>::min()),
                                     o.to.value_or(std::numeric_limits<int>::max()));
  }
  require_single_currency(result.records);
  if (result.records.empty()) throw Error(path.string() + ": no records left after preprocessing");
  log(path.string() + ": " + std::to_string(result.records.size()) + " records retained");
  return result;
}

std::map<int, BipartiteCreditNetwork> networks(const Options& o) {
  std::map<int, BipartiteCreditNetwork> nets;
  for (const auto& [t, recs] : slice_periods(load(o).records)) nets.emplace(t, build_bipartite(recs));
  return nets;
}

template <typename F>
std::string or_nan(F&& f) {
  try {
    return fmt(f());
  } catch (const UndefinedError&) {
    return "nan";
  } catch (const InvalidArgument&) {
    return "nan";
  }
}

// --- subcommands ---------------------------------------------------------

void run_ingest(const Options& o) {
  const auto r = load(o);
  {
    Output out(o, "ledger.csv");
    write_ledger(out.stream(), r.records);
  }
  Output out(o, "exclusions.csv");
  auto w = out.csv();
  w.row({"rule", "records"});
  for (Rule rule : kDefaultRuleOrder) {
    w.row({std::string(rule_name(rule)), std::to_string(r.report.removed.at(rule))});
  }
  w.row({std::string(rule_name(Rule::NameRegularization)), std::to_string(r.report.renamed)});
  w.row({"retained", std::to_string(r.report.retained)});
}

void run_build(const Options& o) {
  auto summary = nlohmann::ordered_json::array();
  for (const auto& [t, net] : networks(o)) {
    const auto tag = std::to_string(t);
    {
      Output out(o, "networks/bipartite_" + tag + ".txt");
      write_edge_list(out.stream(), net);
    }
    const auto pb = project_institutions(net), pf = project_firms(net);
    {
      Output out(o, "networks/institutions_" + tag + ".txt");
      write_edge_list(out.stream(), pb);
    }
    {
      Output out(o, "networks/firms_" + tag + ".txt");
      write_edge_list(out.stream(), pf);
    }
    auto j = summary_json(net);
    j["institution_projection_edges"] = pb.graph.edge_count();
    j["firm_projection_edges"] = pf.graph.edge_count();
    summary.push_back(std::move(j));
  }
  Output out(o, "networks.json");
  out.stream() << summary.dump(2) << '\n';
}

void run_metrics(const Options& o) {
  const auto nets = networks(o);
  Output vm(o, "vertex_metrics.csv"), gm(o, "graph_metrics.csv"), cor(o, "correlations.csv"),
      top(o, "relative_strength_top.csv"), agg(o, "label_aggregates.csv");
  auto wv = vm.csv(), wg = gm.csv(), wc = cor.csv(), wt = top.csv(), wa = agg.csv();
  wa.row({"period", "side", "label", "metric", "mean", "sum"});
  wv.row(vertex_metrics_csv_header());
  wg.row({"period", "graph", "vertices", "edges", "global_clustering", "assortativity"});
  wc.row({"period", "side", "x", "y", "pearson"});
  wt.row({"period", "rank", "institution", "name", "type", "relative_strength", "degree", "strength"});
  for (const auto& [t, net] : nets) {
    const auto tag = std::to_string(t);
    const auto m = full_vertex_metrics(net);
    write_vertex_metrics_rows(wv, t, m);

    const std::pair<std::string, Graph> graphs[] = {
        {"bipartite", net.graph()}, {"institutions", project_institutions(net).graph}, {"firms", project_firms(net).graph}};
    for (const auto& [name, g] : graphs) {
      const auto s = graph_metrics(g);
      wg.row({tag, name, std::to_string(s.vertex_count), std::to_string(s.edge_count), fmt(s.global_clustering),
              s.assortativity ? fmt(*s.assortativity) : "nan"});
    }

    for (Side side : {Side::Institution, Side::Firm}) {
      std::map<std::string, std::vector<double>> cols;
      for (const auto& x : m) {
        if (x.key.side != side) continue;
        cols["degree"].push_back(static_cast<double>(x.degree));
        cols["strength"].push_back(x.strength);
        cols["betweenness"].push_back(x.betweenness);
        cols["closeness"].push_back(x.closeness);
      }
      const char* names[] = {"degree", "strength", "betweenness", "closeness"};
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          wc.row({tag, std::string(side_name(side)), names[a], names[b],
                  or_nan([&] { return pearson(cols[names[a]], cols[names[b]]); })});
        }
      }
    }

    for (Side side : {Side::Institution, Side::Firm}) {
      std::vector<std::string> labels;
      std::map<std::string, std::vector<double>> cols;
      for (const auto& x : m) {
        if (x.key.side != side) continue;
        const auto [s, i] = net.locate(*net.find(x.key));
        labels.push_back(s == Side::Institution ? net.institutions()[i].type : net.firms()[i].industry);
        cols["degree"].push_back(static_cast<double>(x.degree));
        cols["strength"].push_back(x.strength);
        cols["relative_strength"].push_back(x.relative_strength);
      }
      for (const auto& [metric, values] : cols) {
        const auto mean = aggregate_by_label(values, labels, Aggregation::Mean);
        const auto sum = aggregate_by_label(values, labels, Aggregation::Sum);
        for (const auto& [label, v] : mean) {
          wa.row({tag, std::string(side_name(side)), label, metric, fmt(v), fmt(sum.at(label))});
        }
      }
    }

    std::vector<const VertexMetrics*> inst;
    for (const auto& x : m) {
      if (x.key.side == Side::Institution) inst.push_back(&x);
    }
    std::stable_sort(inst.begin(), inst.end(), [](auto* a, auto* b) { return a->relative_strength > b->relative_strength; });
    for (std::size_t k = 0; k < std::min(o.top, inst.size()); ++k) {
      const auto& info = net.institutions()[*net.find_institution(inst[k]->key.id)];
      wt.row({tag, std::to_string(k + 1), info.id, info.name, info.type, fmt(inst[k]->relative_strength),
              std::to_string(inst[k]->degree), fmt(inst[k]->strength)});
    }
  }
}

void run_fit(const Options& o) {
  const auto nets = networks(o);
  Output out(o, "powerlaw.csv");
  auto w = out.csv();
  w.row({"period", "series", "mode", "alpha", "xmin", "ks", "n_tail", "p_value", "status"});
  std::map<std::string, std::vector<double>> pooled;
  auto emit = [&](const std::string& period, const std::string& series, const std::vector<double>& xs, TailMode mode) {
    PowerLawOptions opt;
    opt.mode = mode;
    opt.bootstrap = o.resamples > 0;
    opt.resamples = o.resamples;
    opt.seed = o.seed;
    const std::string mode_name = mode == TailMode::Discrete ? "discrete" : "continuous";
    try {
      const auto f = fit_power_law(xs, opt);
      w.row({period, series, mode_name, fmt(f.alpha), fmt(f.xmin), fmt(f.ks), std::to_string(f.n_tail),
             f.p_value ? fmt(*f.p_value) : "", "ok"});
    } catch (const Error& e) {
      w.row({period, series, mode_name, "", "", "", "", "", e.what()});
    }
  };
  for (const auto& [t, net] : nets) {
    const auto m = vertex_metrics(net);
    std::map<std::string, std::vector<double>> series;
    for (const auto& x : m) {
      const std::string side(side_name(x.key.side));
      if (x.degree == 0) continue;
      series["degree_" + side].push_back(static_cast<double>(x.degree));
      series["strength_" + side].push_back(x.strength);
    }
    for (const auto& [name, xs] : series) {
      emit(std::to_string(t), name, xs, name.starts_with("degree") ? TailMode::Discrete : TailMode::Continuous);
      pooled[name].insert(pooled[name].end(), xs.begin(), xs.end());
    }
  }
  for (const auto& [name, xs] : pooled) {
    emit("all", name, xs, name.starts_with("degree") ? TailMode::Discrete : TailMode::Continuous);
  }
}

void run_communities(const Options& o) {
  const auto nets = networks(o);
  Output sum(o, "communities.csv"), mem(o, "membership.csv");
  auto ws = sum.csv(), wm = mem.csv();
  ws.row({"period", "method", "Q", "n_communities", "largest_share", "representative_institution_type",
          "representative_industry"});
  wm.row({"period", "side", "vertex", "community"});
  DetectionOptions opt;
  opt.divisive_edge_limit = o.divisive_limit;
  for (const auto& [t, net] : nets) {
    const auto tag = std::to_string(t);
    const auto r = detect_communities(net, opt);
    const auto s = summarize_largest(net, r.partition);
    ws.row({tag, std::string(method_name(r.method)), fmt(r.q), std::to_string(s.n_communities),
            fmt(s.largest_share), s.representative_institution_type.value_or(""),
            s.representative_industry.value_or("")});
    for (Vertex v = 0; v < net.vertex_count(); ++v) {
      const auto k = net.key(v);
      wm.row({tag, std::string(side_name(k.side)), k.id, std::to_string(r.partition[v])});
    }
    log("period " + tag + ": Q = " + fmt(r.q));
  }
}

void run_crs(const Options& o) {
  const auto nets = networks(o);
  {
    Output all(o, "crs.csv"), groups(o, "crs_groups.csv"), stats(o, "crs_summary.csv");
    auto wa = all.csv(), wg = groups.csv(), ws = stats.csv();
    wa.row(crs_csv_header());
    wg.row({"period", "attribute", "group", "mean_crs"});
    ws.row({"period", "vertices", "mean", "max", "skewness"});
    for (const auto& [t, net] : nets) {
      const auto tag = std::to_string(t);
      const auto ranking = crs_all(net);
      write_crs_rows(wa, t, ranking);
      for (auto [attr, name] : {std::pair{GroupAttribute::LenderType, "lender_type"},
                                std::pair{GroupAttribute::BorrowerIndustry, "borrower_industry"}}) {
        for (const auto& [g, mean] : group_average_crs(net, ranking, attr)) wg.row({tag, name, g, fmt(mean)});
      }
      std::vector<double> values;
      for (const auto& e : ranking) values.push_back(e.crs);
      double mean = 0;
      for (double v : values) mean += v / static_cast<double>(values.size());
      ws.row({tag, std::to_string(values.size()), values.empty() ? "nan" : fmt(mean),
              values.empty() ? "nan" : fmt(values.front()), or_nan([&] { return skewness(values); })});
    }
  }
  if (!o.theta.empty()) {
    std::ifstream f(o.theta, std::ios::binary);
    if (!f) throw Error("cannot read " + o.theta);
    std::vector<ThetaEntry> schedule;
    try {
      schedule = parse_theta_schedule(f);
    } catch (const Error& e) {
      throw Error(o.theta + ": " + e.what());
    }
    Output out(o, "policy.csv");
    auto w = out.csv();
    w.row({"period", "entity", "side", "theta", "exposure_prev", "max_edge_prev", "capital_floor", "exposure_floor"});
    for (const auto& r : capital_policy(nets, schedule)) {
      w.row({std::to_string(r.period), r.entity.id, std::string(side_name(r.entity.side)), fmt(r.theta),
             fmt(r.exposure_prev), fmt(r.max_edge_prev), fmt(r.capital_floor), fmt(r.exposure_floor)});
    }
  }
}

void run_attack(const Options& o) {
  const Side side = parse_side(o.side);
  if (o.strategy != "crs" && o.strategy != "random" && o.strategy != "both") {
    throw InvalidArgument("unknown strategy '" + o.strategy + "' (expected crs, random or both)");
  }
  const auto nets = networks(o);
  Output res(o, "attack.csv"), tr(o, "attack_trace.csv");
  auto w = res.csv(), wt = tr.csv();
  w.row({"period", "side", "strategy", "removed", "trials", "SLCS", "NC", "GD", "APL", "SLCS_se", "NC_se", "GD_se",
         "APL_se"});
  wt.row({"run", "step", "SLCS", "NC", "GD", "APL"});
  auto row = [&](const std::string& tag, const std::string& strategy, std::size_t removed, std::size_t trials,
                 const PercentChange& p, const PercentChange* se) {
    w.row({tag, std::string(side_name(side)), strategy, std::to_string(removed), std::to_string(trials), fmt(p.slcs),
           fmt(p.nc), fmt(p.gd), fmt(p.apl), se ? fmt(se->slcs) : "", se ? fmt(se->nc) : "", se ? fmt(se->gd) : "",
           se ? fmt(se->apl) : ""});
  };
  for (const auto& [t, net] : nets) {
    const auto tag = std::to_string(t);
    if (o.strategy != "random") {
      const auto trace = attack(net, side, {AttackStrategy::Crs, o.fraction, 0, o.adaptive});
      row(tag, "crs", trace.removed.size(), 1, trace.change, nullptr);
      write_trace_rows(wt, trace, tag + "/crs");
    }
    if (o.strategy != "crs") {
      const auto c = compare_strategies(net, side, o.fraction, o.trials, o.seed);
      row(tag, "random", c.crs_trace.removed.size(), c.trials, c.random_mean, &c.random_stderr);
      write_trace_rows(wt, attack(net, side, {AttackStrategy::Random, o.fraction, o.seed, false}), tag + "/random");
    }
  }
}

void run_panel(const Options& o) {
  const Side side = parse_side(o.side);
  const auto nets = networks(o);
  std::map<int, std::vector<EntityMetrics>> metrics;
  std::map<int, std::map<std::string, double>> crs;
  for (const auto& [t, net] : nets) {
    for (const auto& m : full_vertex_metrics(net)) {
      if (m.key.side != side || m.degree == 0) continue;
      metrics[t].push_back({m.key.id, static_cast<double>(m.degree), m.strength, m.betweenness, m.closeness});
    }
    for (const auto& e : crs_all(net)) {
      if (e.key.side == side) crs[t][e.key.id] = e.crs;
    }
  }
  const auto panel = build_panel(metrics, crs);
  {
    Output out(o, "panel.csv");
    auto w = out.csv();
    w.row({"entity", "period", "CRS", "Degree", "Strength", "Betweenness", "Closeness", "Degree_Lag", "Strength_Lag"});
    for (const auto& r : panel.rows) {
      w.row({r.entity, std::to_string(r.period), fmt(r.crs), fmt(r.degree), fmt(r.strength), fmt(r.betweenness),
             fmt(r.closeness), r.degree_lag ? fmt(*r.degree_lag) : "", r.strength_lag ? fmt(*r.strength_lag) : ""});
    }
  }
  const int first = nets.begin()->first, last = nets.rbegin()->first;
  const auto models = standard_models(o.post_from.value_or(first + (last - first + 1) / 2));
  std::vector<std::optional<RegressionResult>> results;
  auto j = nlohmann::ordered_json::object();
  for (const auto& m : models) {
    try {
      results.push_back(fit_fixed_effects(panel, m.regressors, m.range));
      j[m.label] = to_json(*results.back());
    } catch (const InvalidArgument& e) {
      log("model " + m.label + ": " + e.what());
      results.push_back(std::nullopt);
      j[m.label] = {{"error", e.what()}};
    }
  }
  {
    Output out(o, "regression.txt");
    out.stream() << regression_table("CRS", models, results);
  }
  Output out(o, "regression.json");
  out.stream() << j.dump(2) << '\n';
}

void run_synth(const Options& o, const CLI::Option* seed_opt) {
  SynthConfig c;
  if (!o.config.empty()) {
    std::ifstream f(o.config, std::ios::binary);
    if (!f) throw Error("cannot read " + o.config);
    try {
      c = parse_synth_config(f);
    } catch (const Error& e) {
      throw Error(o.config + ": " + e.what());
    }
  }
  if (seed_opt->count()) c.seed = o.seed;
  const auto records = generate(c);
  Output out(o, "ledger.csv");
  write_ledger(out.stream(), records);
  log(std::to_string(records.size()) + " records over " + std::to_string(c.n_periods) + " period(s)");
}

void run_report(const Options& o) {
  const auto nets = networks(o);
  Output out(o, "series.csv");
  auto w = out.csv();
  w.row({"period", "series", "value"});
  std::map<std::string, std::vector<std::pair<int, double>>> growth;
  for (const auto& [t, net] : nets) {
    const auto tag = std::to_string(t);
    auto put = [&](const std::string& name, double v) { w.row({tag, name, fmt(v)}); };
    put("n_institutions", static_cast<double>(net.institution_count()));
    put("n_firms", static_cast<double>(net.firm_count()));
    put("n_edges", static_cast<double>(net.edge_count()));
    put("total_credit", net.total_weight());
    growth["total_credit"].emplace_back(t, net.total_weight());
    growth["n_edges"].emplace_back(t, static_cast<double>(net.edge_count()));

    const auto m = vertex_metrics(net);
    for (Side side : {Side::Institution, Side::Firm}) {
      const std::string s(side_name(side));
      double n = 0, deg = 0, str = 0, rel = 0;
      std::vector<double> degrees;
      for (const auto& x : m) {
        if (x.key.side != side) continue;
        ++n;
        deg += static_cast<double>(x.degree);
        str += x.strength;
        rel += x.relative_strength;
        if (x.degree > 0) degrees.push_back(static_cast<double>(x.degree));
      }
      put("avg_degree_" + s, deg / n);
      put("avg_strength_" + s, str / n);
      put("avg_relative_strength_" + s, rel / n);
      try {
        PowerLawOptions opt;
        opt.mode = TailMode::Discrete;
        put("degree_exponent_" + s, fit_power_law(degrees, opt).alpha);
      } catch (const Error& e) {
        log("period " + tag + ": no degree exponent for " + s + ": " + e.what());
      }
    }
    put("clustering_institutions", clustering(project_institutions(net).graph).global);
    put("clustering_firms", clustering(project_firms(net).graph).global);
    if (const auto a = assortativity(net.graph())) put("assortativity", *a);

    double national = 0;
    for (std::size_t i = 0; i < net.institution_count(); ++i) {
      if (is_nationally_operated(net.institutions()[i].type)) national += net.lending_total(i);
    }
    const double total = net.total_weight();
    put("national_credit_share", total > 0 ? national / total : 0.0);
    put("local_credit_share", total > 0 ? 1.0 - national / total : 0.0);

    const auto ranking = crs_all(net);
    std::vector<double> values;
    for (const auto& e : ranking) values.push_back(e.crs);
    if (!values.empty()) {
      double mean = 0;
      for (double v : values) mean += v / static_cast<double>(values.size());
      put("crs_mean", mean);
      put("crs_max", values.front());
      growth["crs_mean"].emplace_back(t, mean);
    }
    try {
      put("crs_skewness", skewness(values));
    } catch (const Error&) {
    }
  }

  Output trends(o, "trends.csv");
  auto wt = trends.csv();
  wt.row({"series", "first_period", "last_period", "rate"});
  for (const auto& [name, series] : growth) {
    try {
      wt.row({name, std::to_string(series.front().first), std::to_string(series.back().first),
              fmt(fit_exponential_trend(series))});
    } catch (const InvalidArgument& e) {
      log("trend " + name + ": " + e.what());
    }
  }
}

// Values from a JSON run-config fill options not given on the command line.
void apply_run_config(CLI::App& sub, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path + ": not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw InvalidArgument(path + ": run config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (!opt || key == "config") throw InvalidArgument(path + ": unknown key '" + key + "' for " + sub.get_name());
    if (opt->count()) continue;
    opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite credit-network analytics over loan ledgers"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--in", o.in, "Ledger CSV, or a directory containing ledger.csv");
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--config", o.config, "JSON run config (keys are option names)");
    sub->add_option("--aliases", o.aliases, "Lender-name alias CSV (alias,canonical)");
    sub->add_option("--from", o.from, "First period to analyze");
    sub->add_option("--to", o.to, "Last period to analyze");
  };

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    subs[name] = s;
    return s;
  };
  add_io(add("ingest", "Preprocess a ledger and report exclusions"));
  add_io(add("build", "Build per-period networks and export edge lists"));
  auto* metrics = add("metrics", "Vertex and graph topology metrics");
  add_io(metrics);
  metrics->add_option("--top", o.top, "Rows in the relative-strength ranking")->capture_default_str();
  auto* fit = add("fit", "Power-law fits of degree and strength distributions");
  add_io(fit);
  fit->add_option("--resamples", o.resamples, "Bootstrap resamples for the goodness-of-fit p-value (0: none)");
  fit->add_option("--seed", o.seed, "Bootstrap seed");
  auto* comm = add("communities", "Modularity-based community detection");
  add_io(comm);
  comm->add_option("--divisive-limit", o.divisive_limit, "Edge count above which the greedy method is used")
      ->capture_default_str();
  auto* crs = add("crs", "Credit risk scores, group averages and capital floors");
  add_io(crs);
  crs->add_option("--theta", o.theta, "Theta schedule CSV (period,entity,theta)");
  auto* atk = add("attack", "CRS-ordered versus random vertex removal");
  add_io(atk);
  atk->add_option("--strategy", o.strategy, "crs, random or both")->capture_default_str();
  atk->add_option("--side", o.side, "institution or firm")->capture_default_str();
  atk->add_option("--fraction", o.fraction, "Fraction of the side removed")->capture_default_str();
  atk->add_option("--trials", o.trials, "Random-attack trials")->capture_default_str();
  atk->add_option("--seed", o.seed, "Seed of the first random trial")->capture_default_str();
  atk->add_flag("--adaptive", o.adaptive, "Re-rank by CRS after each removal");
  auto* pan = add("panel", "Fixed-effects regression of CRS on topology");
  add_io(pan);
  pan->add_option("--side", o.side, "institution or firm")->capture_default_str();
  pan->add_option("--post-from", o.post_from, "First period of the post-window model");
  auto* syn = add("synth", "Generate a synthetic loan ledger");
  syn->add_option("--config", o.config, "Synthetic-ledger JSON config");
  syn->add_option("--out", o.out, "Output directory")->capture_default_str();
  auto* seed_opt = syn->add_option("--seed", o.seed, "Overrides the config seed");
  add_io(add("report", "Plot-ready per-period series"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      if (name != "synth" && !o.config.empty()) apply_run_config(*sub, o.config);
      if (o.from && o.to && *o.from > *o.to) throw InvalidArgument("--from is after --to");
      if (name == "ingest") run_ingest(o);
      else if (name == "build") run_build(o);
      else if (name == "metrics") run_metrics(o);
      else if (name == "fit") run_fit(o);
      else if (name == "communities") run_communities(o);
      else if (name == "crs") run_crs(o);
      else if (name == "attack") run_attack(o);
      else if (name == "panel") run_panel(o);
      else if (name == "synth") run_synth(o, seed_opt);
      else if (name == "report") run_report(o);
    }
  } catch (const std::exception& e) {
    std::cerr << "creditnet: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
