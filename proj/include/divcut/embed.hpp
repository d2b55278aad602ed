#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "divcut/diversity.hpp"
#include "divcut/metric.hpp"
#include "divcut/node_set.hpp"
#include "divcut/random.hpp"

namespace divcut {

/// Rooted edge-weighted tree (root = node 0). Original points map onto tree nodes.
struct WeightedTree {
  std::vector<int> parent;            // parent[0] == -1
  std::vector<double> parent_weight;  // weight of the edge to the parent
  std::vector<int> point_node;        // point -> tree node

  int num_tree_nodes() const { return static_cast<int>(parent.size()); }
  int num_points() const { return static_cast<int>(point_node.size()); }

  /// Path length between the tree nodes of two points.
  double distance(int x, int y) const;
  /// Weight of the minimal subtree spanning the points of `a`.
  double diversity(const NodeSet& a) const;
};

/// Builds a tree from a rank-2 hypergraph that is a spanning tree of its nodes.
WeightedTree tree_from_graph(const Hypergraph& g);

DiversityOracle tree_oracle(const WeightedTree& t);

enum class EmbeddingSource { FrtTree, Frechet, Naive, Identity };
std::string to_string(EmbeddingSource source);

/// Map from points to R^m; row i is f(i).
struct Embedding {
  Eigen::MatrixXd coords;
  EmbeddingSource source = EmbeddingSource::Identity;

  int size() const { return static_cast<int>(coords.rows()); }
  int dimension() const { return static_cast<int>(coords.cols()); }
  double diversity(const NodeSet& a) const;
};

/// FRT random hierarchical decomposition (random permutation, beta in [1,2),
/// radii beta * 2^(i-1) in units of the smallest distance). The edge from a
/// cluster to its parent weighs the difference of their diameters, so the tree
/// distance of two points is twice the diameter of their lowest common cluster,
/// and the subtree spanning any A weighs at least its metric Steiner tree.
/// Zero-distance points share a leaf.
WeightedTree frt_embed(const Metric& m, Rng& rng);

/// One coordinate per tree edge: w(e) if e is on the root path of x, else 0.
Embedding tree_to_l1(const WeightedTree& t);

struct SteinerEmbedOptions {
  int trials = 1;
  int exhaustive_size = 4;  // score sets with |A| <= this exhaustively
  int sampled_sets = 256;   // plus this many random larger sets
  int max_sample_size = 8;
};

/// FRT followed by tree_to_l1; with trials > 1 keeps the draw with the smallest
/// measured distortion against the exact Steiner diversity of m.
Embedding steiner_to_l1(const Metric& m, Rng& rng, const SteinerEmbedOptions& options = {});

/// Scaled Frechet embedding: scales t = 1..floor(log2 n), `reps_per_scale`
/// coordinates per scale (0 selects ceil(4 log2 n)), A_i sampled with rate 2^-t,
/// f_i(x) = d(x, A_i) / M with M the number of kept coordinates.
Embedding frechet_embed(const Metric& m, Rng& rng, int reps_per_scale = 0);
Embedding diam_to_l1(const Metric& m, Rng& rng, int reps_per_scale = 0);

/// f(x) = (d(x_1, x), ..., d(x_n, x)).
Embedding naive_embed(const Metric& m);

Embedding identity_embedding(const Eigen::MatrixXd& points);

struct KDiameterRoute {
  Metric metric;
  DiversityOracle diameter;
  int k = 2;
  /// max of delta_diam / delta_kdiam and delta_kdiam / (k delta_diam) over the checked sets.
  double worst_lower = 0.0;
  double worst_upper = 0.0;
  bool certified = false;
};

/// Replaces a k-diameter diversity by the diameter diversity of its induced
/// metric and certifies delta_diam <= delta_kdiam <= k delta_diam on every A
/// with |A| <= check_size.
KDiameterRoute kdiam_route(const DiversityOracle& kdiam, int k, int check_size = 6);

struct WeightedCut {
  NodeSet side;
  double alpha = 0.0;
};

struct CutDecomposition {
  std::vector<WeightedCut> cuts;

  /// sum_B alpha_B delta_B(A)
  double evaluate(const NodeSet& a) const;
};

/// Threshold cuts per coordinate: at most (n-1) m cuts with positive weights
/// whose cut diversities sum to the l1 diversity of the embedding.
CutDecomposition l1_to_cuts(const Embedding& e);

struct DistortionPolicy {
  enum class Kind { Exhaustive, Sampled, Explicit };
  Kind kind = Kind::Exhaustive;
  int max_size = 5;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::vector<NodeSet> sets;  // for Kind::Explicit

  static DistortionPolicy exhaustive(int max_size);
  static DistortionPolicy sampled(int samples, int max_size, std::uint64_t seed);
  static DistortionPolicy explicit_sets(std::vector<NodeSet> sets);
};

struct DistortionReport {
  double c1 = 1.0;  // max delta_X(A) / delta_1(f(A))
  double c2 = 1.0;  // max delta_1(f(A)) / delta_X(A)
  double c = 1.0;
  NodeSet c1_witness;
  NodeSet c2_witness;
  std::size_t sets_checked = 0;
  std::string policy;
};

/// Worst ratios over the checked family. Sets where both sides vanish are
/// skipped; a one-sided zero yields +inf with its witness.
DistortionReport measure_distortion(const DiversityOracle& div, const Embedding& e,
                                    const DistortionPolicy& policy);

}  // namespace divcut
