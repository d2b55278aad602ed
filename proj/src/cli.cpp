#include "divcut/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "divcut/diversity.hpp"
#include "divcut/embed.hpp"
#include "divcut/errors.hpp"
#include "divcut/generate.hpp"
#include "divcut/io.hpp"
#include "divcut/parallel.hpp"
#include "divcut/pipeline.hpp"
#include "divcut/random.hpp"
#include "divcut/steiner.hpp"

namespace divcut {

namespace {

using json = nlohmann::ordered_json;

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_number(x));
}

json set_json(const NodeSet& s) { return s.members(); }

void emit(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) out << text;
  else write_file(path, text);
}

Metric instance_metric(const Instance& inst) {
  Metric m = metric_closure(inst.supply);
  return m.has_infinite() ? finite_completion(m) : m;
}

/// Minimum spanning tree of a finite metric (Prim, lowest index on ties) as a rank-2 hypergraph.
Hypergraph metric_mst(const Metric& m) {
  const int n = m.size();
  Hypergraph tree(n);
  std::vector<double> key(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<int> link(static_cast<std::size_t>(n), -1);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  key[0] = 0.0;
  for (int it = 0; it < n; ++it) {
    int v = -1;
    for (int u = 0; u < n; ++u)
      if (!done[static_cast<std::size_t>(u)] && (v < 0 || key[static_cast<std::size_t>(u)] < key[static_cast<std::size_t>(v)])) v = u;
    done[static_cast<std::size_t>(v)] = 1;
    if (link[static_cast<std::size_t>(v)] >= 0) tree.add_edge({link[static_cast<std::size_t>(v)], v}, m(v, link[static_cast<std::size_t>(v)]));
    for (int u = 0; u < n; ++u)
      if (!done[static_cast<std::size_t>(u)] && m(v, u) < key[static_cast<std::size_t>(u)]) {
        key[static_cast<std::size_t>(u)] = m(v, u);
        link[static_cast<std::size_t>(u)] = v;
      }
  }
  return tree;
}

json distortion_json(const DistortionReport& d) {
  json j;
  j["c1"] = num(d.c1);
  j["c2"] = num(d.c2);
  j["c"] = num(d.c);
  j["sets_checked"] = d.sets_checked;
  return j;
}

bool use_graph_pipeline(const Instance& inst, Route route) {
  return inst.supply.rank() == 2 && (route == Route::Auto || route == Route::SteinerFrt);
}

SolveReport solve_instance(const Instance& inst, std::uint64_t seed, const SolveOptions& options) {
  return use_graph_pipeline(inst, options.route) ? solve_supply_graph(inst, seed, options)
                                                 : solve_general(inst, seed, options);
}

// ---------------------------------------------------------------------------

struct GenFlags {
  std::string kind = "random";
  GeneratorSpec spec;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenFlags& f, std::ostream& out, std::ostream& err) {
  GeneratorSpec spec = f.spec;
  spec.kind = parse_generator_kind(f.kind);
  const Instance inst = generate(spec, f.seed);
  const std::string text = serialize_instance(inst);
  if (f.out.empty()) out << text;
  else write_file(f.out, text);
  err << "n=" << inst.num_nodes() << " m_G=" << inst.supply.num_edges() << " m_H=" << inst.demand.num_edges()
      << " r_G=" << inst.supply.rank() << " r_H=" << inst.demand.rank() << '\n';
  return kExitOk;
}

struct SolveFlags {
  std::string in;
  std::string route = "auto";
  std::string separation = "auto";
  int trials = 16;
  std::uint64_t seed = 1;
  bool brute = false;
  int brute_max = 20;
  int max_rounds = 500;
  bool no_measure = false;
  std::string json_out;
  std::string lp_dump;
};

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  const Instance inst = parse_instance(read_file(f.in));
  SolveOptions opt;
  opt.route = parse_route(f.route);
  opt.separation = parse_separation_mode(f.separation);
  opt.trials = f.trials;
  opt.brute = f.brute;
  opt.brute_max_nodes = f.brute_max;
  opt.max_rounds = f.max_rounds;
  opt.measure = !f.no_measure;
  if (!f.lp_dump.empty()) {
    std::ostringstream lp;
    write_lp(build_relaxation_seed(inst), lp);
    write_file(f.lp_dump, lp.str());
  }
  const SolveReport r = solve_instance(inst, f.seed, opt);

  json doc;
  doc["nodes"] = r.num_nodes;
  doc["cut"] = set_json(r.cut.canonical().side());
  doc["phi_rounded"] = num(r.phi_rounded);
  doc["aggregate_ratio"] = num(r.aggregate_ratio);
  doc["lp_objective"] = num(r.lp_objective);
  doc["route"] = to_string(r.route);
  doc["separation"] = to_string(r.separation);
  doc["rounds"] = r.rounds;
  doc["trials"] = r.trials;
  if (r.phi_brute) doc["phi_brute"] = num(*r.phi_brute);
  if (r.ratio) doc["ratio"] = num(*r.ratio);
  if (r.distortion) doc["distortion"] = distortion_json(*r.distortion);
  emit(doc, f.json_out, out);
  err << "phi=" << format_number(r.phi_rounded) << " lp=" << format_number(r.lp_objective) << " route="
      << to_string(r.route) << " elapsed_ms=" << format_number(r.elapsed_ms) << '\n';
  return kExitOk;
}

struct HspFlags {
  std::string in;
  std::vector<int> terminals;
  std::string mode = "exact";
};

int cmd_hsp(const HspFlags& f, std::ostream& out, std::ostream&) {
  const Instance inst = parse_instance(read_file(f.in));
  const EvalMode mode = f.mode == "exact" ? EvalMode::Exact : EvalMode::Approximate;
  const SteinerSolution s = hsp_solve(inst.supply, f.terminals, mode);
  if (!s.feasible) throw Infeasible("terminals cannot be connected");
  json doc;
  doc["mode"] = to_string(mode);
  doc["cost"] = num(s.cost);
  doc["edges"] = s.edges;
  doc["nodes"] = s.nodes;
  out << doc.dump(2) << '\n';
  return kExitOk;
}

struct EmbedFlags {
  std::string in;
  std::string metric;
  std::string method = "frt";
  int cap = 5;
  std::uint64_t seed = 1;
  int trials = 1;
  int reps = 0;
  std::string out;
};

int cmd_embed(const EmbedFlags& f, std::ostream& out, std::ostream& err) {
  std::optional<Instance> inst;
  Metric m;
  if (!f.in.empty()) {
    inst = parse_instance(read_file(f.in));
    m = instance_metric(*inst);
  } else {
    m = parse_metric(read_file(f.metric));
  }
  Rng rng = make_rng(f.seed, 0);
  std::optional<Embedding> emb;
  std::optional<DiversityOracle> ref;
  if (f.method == "frt") {
    SteinerEmbedOptions so;
    so.trials = f.trials;
    emb = steiner_to_l1(m, rng, so);
    ref = steiner_oracle(m);
  } else if (f.method == "frechet") {
    emb = diam_to_l1(m, rng, f.reps);
    ref = diameter_oracle(m);
  } else if (f.method == "naive") {
    emb = naive_embed(m);
    ref = steiner_oracle(m);
  } else {
    const WeightedTree t = tree_from_graph(inst ? inst->supply : metric_mst(m));
    emb = tree_to_l1(t);
    ref = tree_oracle(t);
  }
  const int cap = std::clamp(f.cap, 1, m.size());
  const DistortionReport d = measure_distortion(*ref, *emb, DistortionPolicy::exhaustive(cap));
  if (!f.out.empty()) write_file(f.out, serialize_points(emb->coords));

  json doc;
  doc["method"] = f.method;
  doc["nodes"] = m.size();
  doc["dimension"] = emb->dimension();
  doc["c1"] = num(d.c1);
  doc["c2"] = num(d.c2);
  doc["c"] = num(d.c);
  doc["sets_checked"] = d.sets_checked;
  doc["c1_witness"] = set_json(d.c1_witness);
  doc["c2_witness"] = set_json(d.c2_witness);
  out << doc.dump(2) << '\n';
  err << "c1=" << format_number(d.c1) << " c2=" << format_number(d.c2) << " c=" << format_number(d.c) << '\n';
  return kExitOk;
}

struct CheckFlags {
  std::string in;
  std::string table;
  std::string oracle;
  std::string mode = "exact";
  int cap = 5;
  int k = 2;
  std::uint64_t seed = 1;
};

int cmd_check(const CheckFlags& f, std::ostream& out, std::ostream& err) {
  std::optional<DiversityOracle> div;
  std::string kind = f.oracle;
  if (!f.table.empty()) {
    if (!kind.empty() && kind != "table") throw InvalidArgument("--table goes with --oracle table");
    kind = "table";
    TableFile t = parse_table(read_file(f.table));
    div = explicit_table_oracle(t.nodes, std::move(t.values));
  } else {
    if (kind.empty()) kind = "hsp";
    if (kind == "table") throw InvalidArgument("--oracle table needs --table");
    const Instance inst = parse_instance(read_file(f.in));
    const EvalMode mode = f.mode == "exact" ? EvalMode::Exact : EvalMode::Approximate;
    if (kind == "hsp") div = hypergraph_steiner_oracle(inst.supply, mode);
    else if (kind == "steiner") div = steiner_oracle(inst.supply, mode);
    else if (kind == "diameter") div = diameter_oracle(instance_metric(inst));
    else div = k_diameter_oracle(hypergraph_steiner_oracle(inst.supply, mode), f.k);
  }
  AxiomCheckOptions opt;
  opt.max_subset_size = std::clamp(f.cap, 1, div->size());
  opt.seed = f.seed;
  const AxiomReport rep = check_axioms(*div, opt);

  json doc;
  doc["oracle"] = kind;
  doc["nodes"] = div->size();
  doc["max_subset_size"] = rep.max_subset_size;
  doc["sets_checked"] = rep.sets_checked;
  doc["clean"] = rep.clean();
  json violations = json::array();
  for (const auto& v : rep.violations) {
    json jv;
    jv["axiom"] = v.axiom;
    json ws = json::array();
    for (const auto& w : v.witnesses) ws.push_back(set_json(w));
    jv["witnesses"] = ws;
    json vals = json::array();
    for (double x : v.values) vals.push_back(num(x));
    jv["values"] = vals;
    violations.push_back(jv);
  }
  doc["violations"] = violations;
  out << doc.dump(2) << '\n';
  err << rep.violations.size() << " violation(s) over " << rep.sets_checked << " sets\n";
  return rep.clean() ? kExitOk : kExitAxioms;
}

struct BenchFlags {
  std::vector<std::string> kinds = {"random", "graph-hyper"};
  std::vector<int> sizes = {6, 8, 10};
  int seeds = 20;
  std::uint64_t seed = 1;
  int m = 0;
  int rank = 3;
  int trials = 16;
  std::string route = "auto";
  std::string separation = "auto";
  int brute_max = 12;
  std::string out;
};

struct BenchRow {
  std::string kind;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<SolveReport> report;
  std::string error;
};

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  if (f.kinds.empty() || f.sizes.empty() || f.seeds <= 0) throw InvalidArgument("empty benchmark suite");
  for (const auto& k : f.kinds) parse_generator_kind(k);
  SolveOptions opt;
  opt.route = parse_route(f.route);
  opt.separation = parse_separation_mode(f.separation);
  opt.trials = f.trials;
  opt.brute = true;
  opt.brute_max_nodes = f.brute_max;

  std::vector<BenchRow> rows;
  for (const auto& k : f.kinds)
    for (int n : f.sizes)
      for (int s = 0; s < f.seeds; ++s)
        rows.push_back({k, n, derive_seed(f.seed, rows.size()), std::nullopt, {}});

  parallel_for(rows.size(), [&](std::size_t i) {
    BenchRow& row = rows[i];
    try {
      GeneratorSpec spec;
      spec.kind = parse_generator_kind(row.kind);
      spec.n = row.n;
      spec.m = f.m > 0 ? f.m : row.n;
      spec.max_rank = std::min(f.rank, row.n);
      spec.weight_lo = 1.0;
      spec.weight_hi = 4.0;
      spec.integer_weights = true;
      const Instance inst = generate(spec, row.seed);
      row.report = solve_instance(inst, row.seed, opt);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  json table = json::array();
  std::vector<SolveReport> ok;
  for (const auto& row : rows) {
    json j;
    j["kind"] = row.kind;
    j["n"] = row.n;
    j["seed"] = row.seed;
    if (!row.report) {
      j["status"] = "error";
      j["error"] = row.error;
      table.push_back(j);
      continue;
    }
    const SolveReport& r = *row.report;
    j["status"] = "ok";
    j["route"] = to_string(r.route);
    j["separation"] = to_string(r.separation);
    j["phi_rounded"] = num(r.phi_rounded);
    j["phi_brute"] = r.phi_brute ? num(*r.phi_brute) : json(nullptr);
    j["ratio"] = r.ratio ? num(*r.ratio) : json(nullptr);
    j["lp_objective"] = num(r.lp_objective);
    j["aggregate_ratio"] = num(r.aggregate_ratio);
    j["rounds"] = r.rounds;
    j["distortion"] = r.distortion ? num(r.distortion->c) : json(nullptr);
    table.push_back(j);
    ok.push_back(r);
  }

  json doc;
  doc["rows"] = table;
  doc["failed"] = rows.size() - ok.size();
  if (!ok.empty()) {
    const BenchSummary s = report(ok);
    json js;
    js["total"] = s.total;
    js["with_ratio"] = s.with_ratio;
    js["median_ratio"] = num(s.median_ratio);
    js["p90_ratio"] = num(s.p90_ratio);
    js["max_ratio"] = num(s.max_ratio);
    js["median_lp_gap"] = num(s.median_lp_gap);
    json by_n = json::object();
    for (const auto& [n, q] : s.ratio_quantiles_by_n) {
      json jq = json::array();
      for (double x : q) jq.push_back(num(x));
      by_n[std::to_string(n)] = jq;
    }
    js["ratio_by_n"] = by_n;
    json routes = json::object();
    for (const auto& [name, rs] : s.routes) routes[name] = {{"count", rs.count}, {"median_ratio", num(rs.median_ratio)}};
    js["routes"] = routes;
    doc["summary"] = js;
    err << "instances=" << s.total << " median_ratio=" << format_number(s.median_ratio)
        << " max_ratio=" << format_number(s.max_ratio) << " failed=" << rows.size() - ok.size() << '\n';
  }
  emit(doc, f.out, out);
  for (const auto& row : rows)
    if (!row.report) err << "failed: " << row.kind << " n=" << row.n << " seed=" << row.seed << ": " << row.error << '\n';
  return ok.empty() ? kExitFailure : kExitOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const LimitReached& e) {
    err << "limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const CapExceeded& e) {
    err << "limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparsest cuts in hypergraphs via diversity embeddings", "divcut"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* g = app.add_subcommand("gen", "Generate an instance file");
  g->add_option("--kind", gen.kind, "random, path, grid, expander, graph-hyper, hyper-uniform")
      ->check(CLI::IsMember({"random", "path", "grid", "expander", "graph-hyper", "hyper-uniform"}));
  g->add_option("--n", gen.spec.n, "Node count");
  g->add_option("--m", gen.spec.m, "Edges per random hypergraph");
  g->add_option("--rank", gen.spec.max_rank, "Maximum random edge size");
  g->add_option("--degree", gen.spec.degree, "Expander degree");
  g->add_option("--rows", gen.spec.rows, "Grid rows");
  g->add_option("--cols", gen.spec.cols, "Grid columns");
  g->add_option("--wlo", gen.spec.weight_lo, "Lowest weight");
  g->add_option("--whi", gen.spec.weight_hi, "Highest weight");
  g->add_flag("--integer", gen.spec.integer_weights, "Integer weights");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--out", gen.out, "Output path (default: stdout)");

  SolveFlags solve;
  auto* s = app.add_subcommand("solve", "Approximate the sparsest cut of an instance");
  s->add_option("--in", solve.in, "Instance file")->required();
  s->add_option("--route", solve.route)->check(CLI::IsMember({"auto", "hs-frt", "kdiam-frechet", "steiner-frt"}));
  s->add_option("--separation", solve.separation)->check(CLI::IsMember({"auto", "exact", "approx"}));
  s->add_option("--trials", solve.trials, "Embedding trials")->check(CLI::PositiveNumber);
  s->add_option("--seed", solve.seed);
  s->add_flag("--brute", solve.brute, "Also compute the exact optimum");
  s->add_option("--brute-max", solve.brute_max, "Node cap for --brute");
  s->add_option("--max-rounds", solve.max_rounds, "Cutting-plane round cap")->check(CLI::PositiveNumber);
  s->add_flag("--no-measure", solve.no_measure, "Skip the distortion measurement");
  s->add_option("--json-out", solve.json_out, "Report path (default: stdout)");
  s->add_option("--lp-dump", solve.lp_dump, "Write the seed relaxation in LP format");

  HspFlags hsp;
  auto* h = app.add_subcommand("hsp", "Cheapest connected hyperedge set spanning terminals");
  h->add_option("--in", hsp.in, "Instance file (supply is used)")->required();
  h->add_option("--terminals", hsp.terminals, "Comma-separated node ids")->required()->delimiter(',');
  h->add_option("--mode", hsp.mode)->check(CLI::IsMember({"exact", "approx"}));

  EmbedFlags embed;
  auto* e = app.add_subcommand("embed", "Embed a metric into l1 and measure the distortion");
  auto* e_in = e->add_option("--in", embed.in, "Instance file (supply closure metric)");
  auto* e_metric = e->add_option("--metric", embed.metric, "Metric file");
  e_in->excludes(e_metric);
  e->add_option("--method", embed.method)->check(CLI::IsMember({"frt", "frechet", "naive", "tree"}));
  e->add_option("--cap", embed.cap, "Largest measured set size")->check(CLI::PositiveNumber);
  e->add_option("--seed", embed.seed);
  e->add_option("--trials", embed.trials, "FRT draws (best kept)")->check(CLI::PositiveNumber);
  e->add_option("--reps", embed.reps, "Frechet coordinates per scale (0: default)");
  e->add_option("--out", embed.out, "Coordinate table path");

  CheckFlags check;
  auto* c = app.add_subcommand("check", "Check the diversity axioms of an oracle");
  auto* c_in = c->add_option("--in", check.in, "Instance file");
  auto* c_table = c->add_option("--table", check.table, "Explicit table file");
  c_in->excludes(c_table);
  c->add_option("--oracle", check.oracle)->check(CLI::IsMember({"hsp", "steiner", "diameter", "kdiam", "table"}));
  c->add_option("--mode", check.mode)->check(CLI::IsMember({"exact", "approx"}));
  c->add_option("--cap", check.cap, "Largest exhaustively checked set")->check(CLI::PositiveNumber);
  c->add_option("--k", check.k, "k for --oracle kdiam")->check(CLI::PositiveNumber);
  c->add_option("--seed", check.seed);

  BenchFlags bench;
  auto* b = app.add_subcommand("bench", "Generate, solve and brute-force a grid of instances");
  b->add_option("--kinds", bench.kinds, "Generator kinds")->delimiter(',');
  b->add_option("--n", bench.sizes, "Node counts")->delimiter(',');
  b->add_option("--seeds", bench.seeds, "Instances per (kind, n)");
  b->add_option("--seed", bench.seed, "Base seed");
  b->add_option("--m", bench.m, "Edges per random hypergraph (0: n)");
  b->add_option("--rank", bench.rank, "Maximum random edge size");
  b->add_option("--trials", bench.trials)->check(CLI::PositiveNumber);
  b->add_option("--route", bench.route)->check(CLI::IsMember({"auto", "hs-frt", "kdiam-frechet", "steiner-frt"}));
  b->add_option("--separation", bench.separation)->check(CLI::IsMember({"auto", "exact", "approx"}));
  b->add_option("--brute-max", bench.brute_max);
  b->add_option("--out", bench.out, "Report path (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitBadFlags;
  }

  if (*g) return guarded([&] { return cmd_gen(gen, out, err); }, err);
  if (*s) return guarded([&] { return cmd_solve(solve, out, err); }, err);
  if (*h) return guarded([&] { return cmd_hsp(hsp, out, err); }, err);
  if (*e) {
    if (embed.in.empty() && embed.metric.empty()) {
      err << "embed needs --in or --metric\n";
      return kExitBadFlags;
    }
    return guarded([&] { return cmd_embed(embed, out, err); }, err);
  }
  if (*c) {
    if (check.in.empty() && check.table.empty()) {
      err << "check needs --in or --table\n";
      return kExitBadFlags;
    }
    return guarded([&] { return cmd_check(check, out, err); }, err);
  }
  return guarded([&] { return cmd_bench(bench, out, err); }, err);
}

}  // namespace divcut
