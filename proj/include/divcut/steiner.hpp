#pragma once

#include <span>
#include <utility>
#include <vector>

#include "divcut/diversity.hpp"
#include "divcut/hypergraph.hpp"
#include "divcut/metric.hpp"

namespace divcut {

/// Undirected graph with nonnegative node weights.
struct NodeWeightedGraph {
  int n = 0;
  std::vector<double> weight;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::vector<int>> adjacency() const;
};

/// Bipartite node-weighted graph: original nodes (weight 0) followed by one
/// auxiliary node per hyperedge (weight w(U)) adjacent to the members of U.
struct HspReduction {
  NodeWeightedGraph graph;
  std::vector<int> edge_node_of;  // hyperedge index -> auxiliary node id
  int original_n = 0;
};

/// Result of a Steiner-type solver. `edges` indexes the graph/hypergraph edge
/// list (empty for node-weighted solutions), `nodes` is the spanned node set.
/// Both are sorted.
struct SteinerSolution {
  std::vector<int> edges;
  std::vector<int> nodes;
  double cost = 0.0;
  bool feasible = false;
};

struct SteinerCaps {
  int max_terminals = 14;   // Dreyfus-Wagner
  int max_enum_nodes = 18;  // node-subset enumeration
};

/// Kou-Markowsky-Berman: MST of the terminal distance closure, expanded to
/// shortest paths, re-spanned and pruned. Cost <= 2 OPT.
SteinerSolution steiner_tree_2approx(const Hypergraph& graph, std::span<const int> terminals);
SteinerSolution steiner_tree_2approx(const Metric& m, std::span<const int> terminals);

/// Dreyfus-Wagner. Throws CapExceeded / Infeasible.
SteinerSolution steiner_tree_exact(const Hypergraph& graph, std::span<const int> terminals,
                                   const SteinerCaps& caps = {});
SteinerSolution steiner_tree_exact(const Metric& m, std::span<const int> terminals,
                                   const SteinerCaps& caps = {});

/// Minimum Steiner tree cost in the complete graph of `m` (cost only).
double steiner_cost(const Metric& m, std::span<const int> terminals, const SteinerCaps& caps = {});

/// Klein-Ravi greedy spider decomposition; `nodes` is a connected superset of
/// the terminals and cost sums their weights (terminal weights included).
SteinerSolution nstp_klein_ravi(const NodeWeightedGraph& g, std::span<const int> terminals);

/// Minimum-weight connected superset of the terminals by subset enumeration.
SteinerSolution nstp_exact(const NodeWeightedGraph& g, std::span<const int> terminals,
                           const SteinerCaps& caps = {});

/// Node-weighted Dreyfus-Wagner; exact, cost 3^k * n.
SteinerSolution nstp_dreyfus_wagner(const NodeWeightedGraph& g, std::span<const int> terminals,
                                    const SteinerCaps& caps = {});

HspReduction hsp_reduce(const Hypergraph& h);

/// Hypergraph Steiner problem. Exact mode runs node-weighted Dreyfus-Wagner
/// on the reduction; approximate mode runs Klein-Ravi on it. `edges` are
/// hyperedge indices.
SteinerSolution hsp_solve(const Hypergraph& h, std::span<const int> terminals, EvalMode mode,
                          const SteinerCaps& caps = {});

/// True iff the chosen hyperedges form a connected subhypergraph containing the terminals.
bool is_connected_subhypergraph(const Hypergraph& h, std::span<const int> edges,
                                std::span<const int> terminals);

/// Pairwise hypergraph Steiner distances (node-weighted shortest paths on the
/// bipartite expansion). Unreachable pairs are +inf.
Metric metric_closure(const Hypergraph& h);

}  // namespace divcut
