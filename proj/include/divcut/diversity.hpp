#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "divcut/hypergraph.hpp"
#include "divcut/metric.hpp"
#include "divcut/node_set.hpp"

namespace divcut {

enum class EvalMode { Exact, Approximate };

enum class DiversityKind {
  Diameter,
  KDiameter,
  Steiner,
  HypergraphSteiner,
  Tree,
  L1,
  Cut,
  ExplicitTable,
  SubadditiveDerived,
};

std::string to_string(DiversityKind kind);
std::string to_string(EvalMode mode);

/// Set function delta over subsets of {0..n-1}. Sets of size <= 1 evaluate to 0
/// without reaching the underlying procedure. Immutable and thread-safe to query.
class DiversityOracle {
 public:
  using Fn = std::function<double(const NodeSet&)>;

  DiversityOracle(int n, DiversityKind kind, EvalMode mode, Fn fn, double factor_bound = 1.0);

  int size() const { return n_; }
  DiversityKind kind() const { return kind_; }
  EvalMode mode() const { return mode_; }
  /// Worst-case ratio to the exact value in approximate mode, 1 when exact.
  double factor_bound() const { return factor_bound_; }

  double operator()(const NodeSet& a) const;
  double operator()(std::initializer_list<int> members) const;

 private:
  int n_;
  DiversityKind kind_;
  EvalMode mode_;
  double factor_bound_;
  std::shared_ptr<const Fn> fn_;
};

/// d(x,y) = delta({x,y}); throws InvalidArgument if the result breaks the triangle inequality.
Metric induced_metric(const DiversityOracle& div);

DiversityOracle diameter_oracle(const Metric& m);

struct KDiameterOptions {
  int max_query_size = 16;
};

/// max over B subset of A with |B| <= k of delta(B); throws CapExceeded for large queries.
DiversityOracle k_diameter_oracle(const DiversityOracle& div, int k, const KDiameterOptions& options = {});

/// Steiner diversity of a weighted graph (rank <= 2 hypergraph).
/// Exact mode uses Dreyfus-Wagner, approximate mode the metric-closure MST.
DiversityOracle steiner_oracle(const Hypergraph& graph, EvalMode mode);

/// Steiner diversity of the complete graph on a metric, computed exactly.
DiversityOracle steiner_oracle(const Metric& m);

DiversityOracle hypergraph_steiner_oracle(const Hypergraph& h, EvalMode mode);

DiversityOracle l1_oracle(const Eigen::MatrixXd& points);

/// delta_U(A) = 1 iff A meets U and is not contained in U.
DiversityOracle cut_oracle(int n, const NodeSet& u);

/// delta(A) = f(A) for |A| >= 2. `f` must be nonnegative, increasing and subadditive.
DiversityOracle from_subadditive(std::function<double(const NodeSet&)> f, int n);

/// Simple undirected graph given by its edge list; used by the independent-set construction.
struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

struct IndependentSetOptions {
  int max_nodes = 24;
};

/// Largest independent set of `g` inside `a` (branching on the lowest vertex).
int max_independent_set(const SimpleGraph& g, const NodeSet& a);

/// Independent-set diversity: f_IS(A) for |A| >= 2.
DiversityOracle independent_set_oracle(const SimpleGraph& g, const IndependentSetOptions& options = {});

/// Table-driven oracle. Unlisted sets take the maximum over listed subsets (0 if none).
DiversityOracle explicit_table_oracle(int n, std::map<std::uint64_t, double> values);

// ---------------------------------------------------------------------------
// Axiom checker

struct AxiomViolation {
  std::string axiom;
  std::vector<NodeSet> witnesses;
  std::vector<double> values;
};

struct AxiomReport {
  int max_subset_size = 0;
  std::size_t sets_checked = 0;
  std::vector<AxiomViolation> violations;

  bool clean() const { return violations.empty(); }
};

struct AxiomCheckOptions {
  int max_subset_size = 5;
  int random_triples = 200;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  /// Check diameter <= delta <= Steiner-of-induced-metric and the chain bounds.
  bool check_sandwich = true;
  /// k values for the k-diameter minimality check.
  std::vector<int> k_values = {2, 3};
  /// Companions; built from the induced metric when absent.
  std::optional<DiversityOracle> diameter;
  std::optional<DiversityOracle> steiner;
};

/// Enumerates every A with |A| <= max_subset_size (capped at n <= 64 nodes) and
/// checks axioms 1-3, monotonicity, the extremal sandwich, the chain and star
/// bounds and k-diameter minimality. The triangle axiom is checked with
/// singleton C plus `random_triples` random larger triples; together with
/// monotonicity this covers every nonempty C.
AxiomReport check_axioms(const DiversityOracle& div, const AxiomCheckOptions& options = {});

}  // namespace divcut
