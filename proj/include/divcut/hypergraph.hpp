#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "divcut/node_set.hpp"

namespace divcut {

struct Hyperedge {
  std::vector<int> members;  // sorted, distinct
  double weight = 0.0;
};

/// Weighted hypergraph on nodes 0..n-1. Parallel edges are kept as separate entries.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(int n);
  Hypergraph(int n, std::vector<Hyperedge> edges);

  /// Members are sorted and deduplicated; throws InvalidArgument on an empty
  /// member set, an out-of-range node or a negative / non-finite weight.
  void add_edge(std::vector<int> members, double weight);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  const Hyperedge& edge(std::size_t i) const { return edges_[i]; }
  NodeSet edge_set(std::size_t i) const { return NodeSet(n_, edges_[i].members); }

  /// Maximum edge cardinality, 0 without edges.
  int rank() const;
  double total_weight() const;

  /// Same edges with weights replaced by `weights` (one per edge).
  Hypergraph reweighted(std::span<const double> weights) const;

 private:
  int n_ = 0;
  std::vector<Hyperedge> edges_;
};

/// Supply and demand hypergraph over a shared node set.
struct Instance {
  Hypergraph supply;
  Hypergraph demand;

  int num_nodes() const { return supply.num_nodes(); }
};

/// Validates the instance invariants and returns it; throws InvalidArgument.
Instance make_instance(Hypergraph supply, Hypergraph demand);
void validate(const Instance& inst);

/// A nontrivial bipartition, represented by one side.
class Cut {
 public:
  explicit Cut(NodeSet side);

  const NodeSet& side() const { return side_; }
  int num_nodes() const { return side_.universe(); }
  /// The same bipartition, represented by the side that holds node 0.
  Cut canonical() const;

  friend bool operator==(const Cut&, const Cut&) = default;

 private:
  NodeSet side_;
};

struct SparsityReport {
  Cut cut;
  double numerator = 0.0;    // cut supply weight
  double denominator = 0.0;  // cut demand weight
  double phi = std::numeric_limits<double>::infinity();
};

bool is_cut_by(std::span<const int> edge, const NodeSet& side);
inline bool is_cut_by(const Hyperedge& edge, const Cut& cut) { return is_cut_by(edge.members, cut.side()); }

/// Total weight of the edges of `h` split by `cut`.
double cut_weight(const Hypergraph& h, const Cut& cut);

SparsityReport sparsity(const Instance& inst, const Cut& cut);
double expansion(const Hypergraph& h, const Cut& cut);

/// Complete graph on n nodes with unit pair weights.
Hypergraph uniform_demand(int n);

struct BruteOptions {
  int max_nodes = 20;
};

/// Exhaustive minimum over all 2^(n-1)-1 cuts (side containing node 0).
/// Ties go to the lexicographically smallest side; zero-denominator cuts are skipped.
SparsityReport brute_sparsest_cut(const Instance& inst, const BruteOptions& options = {});

}  // namespace divcut
