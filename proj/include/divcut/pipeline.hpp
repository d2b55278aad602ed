#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "divcut/diversity.hpp"
#include "divcut/embed.hpp"
#include "divcut/hypergraph.hpp"
#include "divcut/lp.hpp"

namespace divcut {

enum class SeparationMode { Auto, Exact, Approximate };
enum class Route { Auto, HypergraphSteinerFrt, KDiameterFrechet, SteinerFrt };

std::string to_string(SeparationMode mode);
std::string to_string(Route route);
SeparationMode parse_separation_mode(const std::string& name);
Route parse_route(const std::string& name);

/// Exact when the supply has at most `exact_edge_limit` edges.
EvalMode resolve_separation(const Instance& inst, SeparationMode mode, std::size_t exact_edge_limit = 20);

/// Variables d_U (one per supply edge, first) and y_S (one per demand edge).
/// Rows: sum w_H(S) y_S >= 1; y_S <= 0 for singleton demands; one tree row per
/// demand from an approximate Steiner tree under unit weights.
/// Throws Infeasible if a demand edge cannot be served.
LpModel build_relaxation_seed(const Instance& inst);

/// Rows sum_{U in t} d_U >= y_S for every demand S whose cheapest found tree t
/// (under weights d) costs less than y_S - 1e-7.
std::vector<LpRow> separate(const Instance& inst, const Eigen::VectorXd& values, EvalMode mode);

struct RelaxationResult {
  std::vector<double> d;  // per supply edge
  std::vector<double> y;  // per demand edge
  double objective = 0.0;
  EvalMode separation = EvalMode::Exact;
  int rounds = 0;
};

/// Supply hypergraph reweighted by the LP values, with its Steiner diversity.
struct LpDiversity {
  Hypergraph reweighted;
  DiversityOracle oracle;
};

struct RelaxationOutcome {
  RelaxationResult relaxation;
  LpDiversity diversity;
};

struct RelaxationOptions {
  int max_rounds = 500;
  /// Use graph Steiner trees (exact or KMB) instead of hypergraph Steiner separation.
  bool graph_separation = false;
};

/// Cutting planes over the seed model. Throws LimitReached when the round cap is hit.
RelaxationOutcome solve_relaxation(const Instance& inst, EvalMode mode, const RelaxationOptions& options = {});

/// Relaxation with every constraint of T_(G,S) written out (all connected edge
/// subsets covering S). Test and cross-check use only; caps |E_G| at 16.
LpSolution solve_relaxation_explicit(const Instance& inst);

struct RoundingResult {
  SparsityReport best;
  /// sum alpha num / sum alpha den over the decomposition (+inf when the denominator vanishes).
  double aggregate_ratio = 0.0;
  std::size_t candidates = 0;
};

/// Pulls back every threshold cut of the embedding and returns the sparsest.
/// Throws Error("embedding collapsed") if no cut has a positive denominator.
RoundingResult round_cut(const Instance& inst, const Embedding& emb);

struct SolveOptions {
  Route route = Route::Auto;
  SeparationMode separation = SeparationMode::Auto;
  int trials = 16;
  bool brute = false;
  int brute_max_nodes = 20;
  int max_rounds = 500;
  /// Measure the chosen embedding against the LP diversity on the supply and demand edges.
  bool measure = true;
};

struct SolveReport {
  explicit SolveReport(Cut c) : cut(std::move(c)) {}

  Cut cut;
  double phi_rounded = 0.0;
  double aggregate_ratio = 0.0;
  double lp_objective = 0.0;
  Route route = Route::Auto;
  EvalMode separation = EvalMode::Exact;
  int rounds = 0;
  int trials = 0;
  std::optional<double> phi_brute;
  std::optional<double> ratio;
  std::optional<DistortionReport> distortion;
  double elapsed_ms = 0.0;  // not part of any deterministic output
  int num_nodes = 0;
  std::string label;
};

/// LP relaxation, metric closure of the LP diversity, embedding (route by
/// min{r_G, r_H}), best-of-trials rounding.
SolveReport solve_general(const Instance& inst, std::uint64_t seed, const SolveOptions& options = {});

/// Supply graphs (rank 2): graph Steiner separation and the steiner-frt route.
/// Throws InvalidArgument when the supply rank is not 2.
SolveReport solve_supply_graph(const Instance& inst, std::uint64_t seed, const SolveOptions& options = {});

struct RouteStats {
  std::size_t count = 0;
  double median_ratio = 0.0;
};

struct BenchSummary {
  std::size_t total = 0;
  std::size_t with_ratio = 0;
  double median_ratio = 0.0;
  double p90_ratio = 0.0;
  double max_ratio = 0.0;
  double median_lp_gap = 0.0;  // phi_brute / lp_objective
  std::map<int, std::vector<double>> ratio_quantiles_by_n;  // n -> {min, median, max}
  std::map<std::string, RouteStats> routes;
};

/// Median uses the mean of the two middle elements for even counts.
double median(std::vector<double> values);

/// Throws InvalidArgument on empty input.
BenchSummary report(const std::vector<SolveReport>& results);

}  // namespace divcut
