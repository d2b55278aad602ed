#include "divcut/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include "divcut/errors.hpp"
#include "divcut/metric.hpp"
#include "divcut/parallel.hpp"
#include "divcut/steiner.hpp"

namespace divcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeparationSlack = 1e-7;
constexpr double kClamp = 1e-12;

int d_var(std::size_t u) { return static_cast<int>(u); }
int y_var(const Instance& inst, std::size_t s) { return static_cast<int>(inst.supply.num_edges() + s); }

LpRow tree_row(const Instance& inst, std::size_t s, const std::vector<int>& edges) {
  LpRow row;
  for (int e : edges) row.coeffs.emplace_back(d_var(static_cast<std::size_t>(e)), 1.0);
  row.coeffs.emplace_back(y_var(inst, s), -1.0);
  row.relation = Relation::GreaterEqual;
  row.rhs = 0.0;
  return row;
}

std::vector<double> clamped(const Eigen::VectorXd& values, std::size_t from, std::size_t count, double floor) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double v = values[static_cast<Eigen::Index>(from + i)];
    out[i] = v < floor ? 0.0 : v;
  }
  return out;
}

SteinerSolution cheapest_tree(const Hypergraph& h, std::span<const int> terminals, EvalMode mode, bool graph) {
  if (!graph) return hsp_solve(h, terminals, mode);
  return mode == EvalMode::Exact ? steiner_tree_exact(h, terminals) : steiner_tree_2approx(h, terminals);
}

std::vector<LpRow> separate_impl(const Instance& inst, const Eigen::VectorXd& values, EvalMode mode, bool graph) {
  const std::size_t mg = inst.supply.num_edges();
  const Hypergraph weighted = inst.supply.reweighted(clamped(values, 0, mg, 0.0));
  std::vector<LpRow> rows;
  for (std::size_t s = 0; s < inst.demand.num_edges(); ++s) {
    const auto& members = inst.demand.edge(s).members;
    if (members.size() < 2) continue;
    const double y = values[y_var(inst, s)];
    if (y <= kSeparationSlack) continue;
    const SteinerSolution t = cheapest_tree(weighted, members, mode, graph);
    if (t.cost < y - kSeparationSlack) rows.push_back(tree_row(inst, s, t.edges));
  }
  return rows;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct Trial {
  std::optional<RoundingResult> rounding;
  Embedding embedding;
};

SolveReport run_pipeline(const Instance& inst, std::uint64_t seed, const SolveOptions& options, bool graph,
                         Route route, EvalMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  if (options.trials < 1) throw InvalidArgument("trials must be positive");

  RelaxationOptions ro;
  ro.max_rounds = options.max_rounds;
  ro.graph_separation = graph;
  const RelaxationOutcome outcome = solve_relaxation(inst, mode, ro);

  Metric closure = metric_closure(outcome.diversity.reweighted);
  if (closure.has_infinite()) closure = finite_completion(closure);

  std::vector<Trial> trials(static_cast<std::size_t>(options.trials));
  parallel_for(trials.size(), [&](std::size_t t) {
    Rng rng = make_rng(seed, t);
    Embedding emb = route == Route::KDiameterFrechet ? diam_to_l1(closure, rng) : steiner_to_l1(closure, rng);
    try {
      trials[t].rounding = round_cut(inst, emb);
    } catch (const Error&) {
      // collapsed draw; other trials may still succeed
    }
    trials[t].embedding = std::move(emb);
  });

  std::size_t best = trials.size();
  for (std::size_t t = 0; t < trials.size(); ++t) {
    if (!trials[t].rounding) continue;
    if (best == trials.size() || trials[t].rounding->best.phi < trials[best].rounding->best.phi) best = t;
  }
  if (best == trials.size()) throw Error("embedding collapsed in every trial");
  const RoundingResult& rr = *trials[best].rounding;

  SolveReport rep(rr.best.cut);
  rep.phi_rounded = rr.best.phi;
  rep.aggregate_ratio = rr.aggregate_ratio;
  rep.lp_objective = outcome.relaxation.objective;
  rep.route = route;
  rep.separation = mode;
  rep.rounds = outcome.relaxation.rounds;
  rep.trials = options.trials;
  rep.num_nodes = inst.num_nodes();

  if (options.measure) {
    std::vector<NodeSet> sets;
    std::unordered_set<NodeSet, NodeSetHash> seen;
    for (const Hypergraph* h : {&inst.supply, &inst.demand})
      for (std::size_t i = 0; i < h->num_edges(); ++i) {
        NodeSet a = h->edge_set(i);
        if (a.size() >= 2 && seen.insert(a).second) sets.push_back(std::move(a));
      }
    try {
      rep.distortion = measure_distortion(outcome.diversity.oracle, trials[best].embedding,
                                          DistortionPolicy::explicit_sets(std::move(sets)));
    } catch (const CapExceeded&) {
      // exact LP diversity too large to evaluate; distortion stays unreported
    }
  }

  if (options.brute && inst.num_nodes() <= options.brute_max_nodes) {
    const SparsityReport b = brute_sparsest_cut(inst, {options.brute_max_nodes});
    rep.phi_brute = b.phi;
    if (b.phi > 0.0) rep.ratio = rep.phi_rounded / b.phi;
    else rep.ratio = rep.phi_rounded > 0.0 ? kInf : 1.0;
  }
  rep.elapsed_ms = elapsed_since(t0);
  return rep;
}

}  // namespace

std::string to_string(SeparationMode mode) {
  switch (mode) {
    case SeparationMode::Auto: return "auto";
    case SeparationMode::Exact: return "exact";
    case SeparationMode::Approximate: return "approx";
  }
  return "auto";
}

std::string to_string(Route route) {
  switch (route) {
    case Route::Auto: return "auto";
    case Route::HypergraphSteinerFrt: return "hs-frt";
    case Route::KDiameterFrechet: return "kdiam-frechet";
    case Route::SteinerFrt: return "steiner-frt";
  }
  return "auto";
}

SeparationMode parse_separation_mode(const std::string& name) {
  if (name == "auto") return SeparationMode::Auto;
  if (name == "exact") return SeparationMode::Exact;
  if (name == "approx" || name == "approximate") return SeparationMode::Approximate;
  throw InvalidArgument("unknown separation mode: " + name);
}

Route parse_route(const std::string& name) {
  if (name == "auto") return Route::Auto;
  if (name == "hs-frt") return Route::HypergraphSteinerFrt;
  if (name == "kdiam-frechet") return Route::KDiameterFrechet;
  if (name == "steiner-frt") return Route::SteinerFrt;
  throw InvalidArgument("unknown route: " + name);
}

EvalMode resolve_separation(const Instance& inst, SeparationMode mode, std::size_t exact_edge_limit) {
  switch (mode) {
    case SeparationMode::Exact: return EvalMode::Exact;
    case SeparationMode::Approximate: return EvalMode::Approximate;
    case SeparationMode::Auto: break;
  }
  return inst.supply.num_edges() <= exact_edge_limit ? EvalMode::Exact : EvalMode::Approximate;
}

LpModel build_relaxation_seed(const Instance& inst) {
  validate(inst);
  LpModel model;
  for (std::size_t u = 0; u < inst.supply.num_edges(); ++u)
    model.add_variable("d" + std::to_string(u), inst.supply.edge(u).weight);
  for (std::size_t s = 0; s < inst.demand.num_edges(); ++s) model.add_variable("y" + std::to_string(s), 0.0);

  LpRow norm;
  for (std::size_t s = 0; s < inst.demand.num_edges(); ++s)
    if (inst.demand.edge(s).weight > 0.0) norm.coeffs.emplace_back(y_var(inst, s), inst.demand.edge(s).weight);
  norm.relation = Relation::GreaterEqual;
  norm.rhs = 1.0;
  model.add_row(std::move(norm));

  const std::vector<double> unit(inst.supply.num_edges(), 1.0);
  const Hypergraph unit_supply = inst.supply.reweighted(unit);
  for (std::size_t s = 0; s < inst.demand.num_edges(); ++s) {
    const auto& members = inst.demand.edge(s).members;
    if (members.size() < 2) {
      model.add_row({{{y_var(inst, s), 1.0}}, Relation::LessEqual, 0.0});
      continue;
    }
    SteinerSolution t;
    try {
      t = hsp_solve(unit_supply, members, EvalMode::Approximate);
    } catch (const Infeasible&) {
      throw Infeasible("demand edge " + std::to_string(s) + " cannot be connected by the supply");
    }
    model.add_row(tree_row(inst, s, t.edges));
  }
  return model;
}

std::vector<LpRow> separate(const Instance& inst, const Eigen::VectorXd& values, EvalMode mode) {
  return separate_impl(inst, values, mode, false);
}

RelaxationOutcome solve_relaxation(const Instance& inst, EvalMode mode, const RelaxationOptions& options) {
  if (options.graph_separation && inst.supply.rank() > 2)
    throw InvalidArgument("graph separation needs a supply of rank at most 2");
  const LpModel seed = build_relaxation_seed(inst);
  const bool graph = options.graph_separation;
  const auto result = cutting_plane(
      seed, [&](const Eigen::VectorXd& x) { return separate_impl(inst, x, mode, graph); }, options.max_rounds);
  switch (result.solution.status) {
    case LpStatus::Optimal: break;
    case LpStatus::Infeasible: throw Infeasible("relaxation is infeasible");
    case LpStatus::Unbounded: throw Error("relaxation is unbounded");
    case LpStatus::IterationLimit: throw LimitReached("simplex pivot limit reached");
  }
  if (!result.converged) throw LimitReached("cutting-plane round limit reached");

  const std::size_t mg = inst.supply.num_edges();
  const std::size_t mh = inst.demand.num_edges();
  RelaxationResult rel;
  rel.d = clamped(result.solution.values, 0, mg, 0.0);
  rel.y = clamped(result.solution.values, mg, mh, 0.0);
  for (std::size_t u = 0; u < mg; ++u) rel.objective += inst.supply.edge(u).weight * rel.d[u];
  rel.separation = mode;
  rel.rounds = result.rounds;

  Hypergraph reweighted = inst.supply.reweighted(clamped(result.solution.values, 0, mg, kClamp));
  DiversityOracle oracle = hypergraph_steiner_oracle(reweighted, EvalMode::Exact);
  return {std::move(rel), {std::move(reweighted), std::move(oracle)}};
}

LpSolution solve_relaxation_explicit(const Instance& inst) {
  const std::size_t mg = inst.supply.num_edges();
  if (mg > 16) throw CapExceeded("explicit relaxation supports at most 16 supply edges");
  LpModel model = build_relaxation_seed(inst);
  for (std::size_t s = 0; s < inst.demand.num_edges(); ++s) {
    const auto& members = inst.demand.edge(s).members;
    if (members.size() < 2) continue;
    std::vector<std::uint32_t> covering;
    for (std::uint32_t mask = 1; mask < (1u << mg); ++mask) {
      std::vector<int> edges;
      for (std::size_t u = 0; u < mg; ++u)
        if (mask >> u & 1u) edges.push_back(static_cast<int>(u));
      if (is_connected_subhypergraph(inst.supply, edges, members)) covering.push_back(mask);
    }
    // keep inclusion-minimal sets; supersets give weaker rows under nonnegative d
    for (std::uint32_t mask : covering) {
      const bool minimal = std::none_of(covering.begin(), covering.end(), [&](std::uint32_t other) {
        return other != mask && (other & mask) == other;
      });
      if (!minimal) continue;
      std::vector<int> edges;
      for (std::size_t u = 0; u < mg; ++u)
        if (mask >> u & 1u) edges.push_back(static_cast<int>(u));
      model.add_row(tree_row(inst, s, edges));
    }
  }
  return simplex_solve(model);
}

RoundingResult round_cut(const Instance& inst, const Embedding& emb) {
  const int n = inst.num_nodes();
  if (emb.size() != n) throw InvalidArgument("embedding size does not match the instance");
  const CutDecomposition dec = l1_to_cuts(emb);

  RoundingResult out{SparsityReport{Cut(NodeSet::from_mask(std::max(n, 2), 1))}};
  double agg_num = 0.0, agg_den = 0.0;
  std::unordered_set<NodeSet, NodeSetHash> seen;
  bool found = false;
  for (const WeightedCut& wc : dec.cuts) {
    if (wc.side.empty() || wc.side.size() == n) continue;
    const Cut cut = Cut(wc.side).canonical();
    const SparsityReport sr = sparsity(inst, cut);
    agg_num += wc.alpha * sr.numerator;
    agg_den += wc.alpha * sr.denominator;
    if (!seen.insert(cut.side()).second) continue;
    ++out.candidates;
    if (sr.denominator <= 0.0) continue;
    if (!found || sr.phi < out.best.phi) {
      out.best = sr;
      found = true;
    }
  }
  if (!found) throw Error("embedding collapsed");
  out.aggregate_ratio = agg_den > 0.0 ? agg_num / agg_den : kInf;
  return out;
}

SolveReport solve_general(const Instance& inst, std::uint64_t seed, const SolveOptions& options) {
  validate(inst);
  Route route = options.route;
  if (route == Route::Auto)
    route = inst.supply.rank() <= inst.demand.rank() ? Route::HypergraphSteinerFrt : Route::KDiameterFrechet;
  return run_pipeline(inst, seed, options, false, route, resolve_separation(inst, options.separation));
}

SolveReport solve_supply_graph(const Instance& inst, std::uint64_t seed, const SolveOptions& options) {
  validate(inst);
  if (inst.supply.rank() != 2) throw InvalidArgument("supply graph solver needs a supply of rank 2");
  const Route route = options.route == Route::Auto ? Route::SteinerFrt : options.route;
  const EvalMode mode = options.separation == SeparationMode::Exact ? EvalMode::Exact : EvalMode::Approximate;
  return run_pipeline(inst, seed, options, true, route, mode);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size();
  return k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

BenchSummary report(const std::vector<SolveReport>& results) {
  if (results.empty()) throw InvalidArgument("no results to report");
  BenchSummary sum;
  sum.total = results.size();
  std::vector<double> ratios, gaps;
  std::map<int, std::vector<double>> by_n;
  std::map<std::string, std::vector<double>> route_ratios;
  for (const auto& r : results) {
    auto& rs = sum.routes[to_string(r.route)];
    ++rs.count;
    auto& rr = route_ratios[to_string(r.route)];
    if (r.phi_brute && r.lp_objective > 0.0) gaps.push_back(*r.phi_brute / r.lp_objective);
    if (!r.ratio) continue;
    ratios.push_back(*r.ratio);
    rr.push_back(*r.ratio);
    by_n[r.num_nodes].push_back(*r.ratio);
  }
  sum.with_ratio = ratios.size();
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    sum.median_ratio = median(ratios);
    const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(ratios.size())));
    sum.p90_ratio = ratios[std::max<std::size_t>(rank, 1) - 1];
    sum.max_ratio = ratios.back();
  }
  if (!gaps.empty()) sum.median_lp_gap = median(gaps);
  for (auto& [n, v] : by_n) {
    std::sort(v.begin(), v.end());
    sum.ratio_quantiles_by_n[n] = {v.front(), median(v), v.back()};
  }
  for (auto& [name, v] : route_ratios)
    if (!v.empty()) sum.routes[name].median_ratio = median(v);
  return sum;
}

}  // namespace divcut
