#pragma once

// Test-side generators and brute-force oracles. Nothing here calls the
// library's algorithms; only its data types are shared.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "divcut/hypergraph.hpp"
#include "divcut/lp.hpp"
#include "divcut/metric.hpp"
#include "divcut/node_set.hpp"
#include "divcut/random.hpp"

namespace divcut::testing {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline std::vector<int> mask_members(std::uint64_t mask) {
  std::vector<int> out;
  for (; mask != 0; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

inline void floyd(Eigen::MatrixXd& d) {
  const auto n = d.rows();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
}

/// Shortest-path metric of a complete graph with weights in [1, 10].
inline Metric random_metric(Rng& rng, int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = uniform(rng, 1.0, 10.0);
  floyd(d);
  return Metric(d);
}

/// Euclidean metric of random points in the unit square.
inline Metric random_euclidean(Rng& rng, int n) {
  Eigen::MatrixXd p(n, 2);
  for (int i = 0; i < n; ++i) p.row(i) << uniform01(rng), uniform01(rng);
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = (p.row(i) - p.row(j)).norm();
  return Metric(d, MetricCheck::Basic);
}

struct RandomTree {
  std::vector<int> parent;  // parent[0] = -1
  std::vector<double> weight;
};

inline RandomTree random_tree(Rng& rng, int n) {
  RandomTree t;
  t.parent.assign(static_cast<std::size_t>(n), -1);
  t.weight.assign(static_cast<std::size_t>(n), 0.0);
  for (int v = 1; v < n; ++v) {
    t.parent[static_cast<std::size_t>(v)] = uniform_int(rng, 0, v - 1);
    t.weight[static_cast<std::size_t>(v)] = uniform(rng, 0.1, 5.0);
  }
  return t;
}

inline Hypergraph tree_graph(const RandomTree& t) {
  Hypergraph g(static_cast<int>(t.parent.size()));
  for (std::size_t v = 1; v < t.parent.size(); ++v) g.add_edge({t.parent[v], static_cast<int>(v)}, t.weight[v]);
  return g;
}

/// Weight of the edges v-parent(v) whose removal separates two members of `a`.
inline double direct_subtree_weight(const RandomTree& t, std::uint64_t a) {
  const int n = static_cast<int>(t.parent.size());
  std::vector<int> below(static_cast<std::size_t>(n), 0);
  for (int v = n - 1; v >= 1; --v) {
    below[static_cast<std::size_t>(v)] += (a >> v) & 1U;
    below[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])] += below[static_cast<std::size_t>(v)];
  }
  const int total = std::popcount(a);
  double sum = 0.0;
  for (int v = 1; v < n; ++v) {
    const int b = below[static_cast<std::size_t>(v)];
    if (b > 0 && b < total) sum += t.weight[static_cast<std::size_t>(v)];
  }
  return sum;
}

/// Random hypergraph with edges of size 2..max_rank, made connected by extra pair edges.
inline Hypergraph random_hypergraph(Rng& rng, int n, int m, int max_rank, bool integer, bool connected) {
  Hypergraph h(n);
  for (int i = 0; i < m; ++i) {
    const int size = uniform_int(rng, 2, std::min(max_rank, n));
    std::vector<int> nodes(static_cast<std::size_t>(n));
    std::iota(nodes.begin(), nodes.end(), 0);
    shuffle(nodes.begin(), nodes.end(), rng);
    nodes.resize(static_cast<std::size_t>(size));
    h.add_edge(nodes, integer ? uniform_int(rng, 1, 5) : uniform(rng, 0.5, 4.0));
  }
  if (connected) {
    std::vector<int> comp(static_cast<std::size_t>(n));
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int v) {
      while (comp[static_cast<std::size_t>(v)] != v) v = comp[static_cast<std::size_t>(v)];
      return v;
    };
    for (const auto& e : h.edges())
      for (int v : e.members) comp[static_cast<std::size_t>(find(v))] = find(e.members.front());
    for (int v = 1; v < n; ++v)
      if (find(v) != find(0)) {
        const int u = uniform_int(rng, 0, v - 1);
        h.add_edge({u, v}, integer ? uniform_int(rng, 1, 5) : uniform(rng, 0.5, 4.0));
        comp[static_cast<std::size_t>(find(v))] = find(u);
      }
  }
  return h;
}

/// Connectivity of an edge subset that also covers `terminals` (own union-find).
inline bool subset_connects(const Hypergraph& h, std::uint64_t edges, std::uint64_t terminals) {
  const int n = h.num_nodes();
  std::vector<int> comp(static_cast<std::size_t>(n));
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int v) {
    while (comp[static_cast<std::size_t>(v)] != v) v = comp[static_cast<std::size_t>(v)];
    return v;
  };
  std::uint64_t covered = 0;
  for (int e : mask_members(edges)) {
    const auto& m = h.edge(static_cast<std::size_t>(e)).members;
    for (int v : m) {
      covered |= std::uint64_t{1} << v;
      comp[static_cast<std::size_t>(find(v))] = find(m.front());
    }
  }
  if ((terminals & ~covered) != 0) return std::popcount(terminals) <= 1 && edges == 0;
  int root = -1;
  for (int v : mask_members(covered)) {
    if (root < 0) root = find(v);
    else if (find(v) != root) return false;
  }
  return true;
}

/// Cheapest connected hyperedge subset covering the terminals; +inf if none.
inline double brute_hsp(const Hypergraph& h, std::uint64_t terminals) {
  if (std::popcount(terminals) <= 1) return 0.0;
  const std::size_t m = h.num_edges();
  double best = kInf;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s) {
    double w = 0.0;
    for (int e : mask_members(s)) w += h.edge(static_cast<std::size_t>(e)).weight;
    if (w < best && subset_connects(h, s, terminals)) best = w;
  }
  return best;
}

/// Steiner tree in the complete graph of a metric: MST over the cheapest superset.
inline double brute_metric_steiner(const Metric& m, std::uint64_t terminals) {
  const int n = m.size();
  if (std::popcount(terminals) <= 1) return 0.0;
  double best = kInf;
  const std::uint64_t others = ((std::uint64_t{1} << n) - 1) & ~terminals;
  for (std::uint64_t extra = others;; extra = (extra - 1) & others) {
    const auto nodes = mask_members(terminals | extra);
    std::vector<double> key(nodes.size(), kInf);
    std::vector<char> in(nodes.size(), 0);
    key[0] = 0.0;
    double total = 0.0;
    for (std::size_t it = 0; it < nodes.size(); ++it) {
      std::size_t v = nodes.size();
      for (std::size_t u = 0; u < nodes.size(); ++u)
        if (!in[u] && (v == nodes.size() || key[u] < key[v])) v = u;
      in[v] = 1;
      total += key[v];
      for (std::size_t u = 0; u < nodes.size(); ++u)
        if (!in[u]) key[u] = std::min(key[u], m(nodes[v], nodes[u]));
    }
    best = std::min(best, total);
    if (extra == 0) break;
  }
  return best;
}

/// Direct l1 diversity: sum over coordinates of max - min.
inline double direct_l1(const Eigen::MatrixXd& points, std::uint64_t a) {
  const auto members = mask_members(a);
  if (members.size() < 2) return 0.0;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    double lo = kInf, hi = -kInf;
    for (int x : members) {
      lo = std::min(lo, points(x, j));
      hi = std::max(hi, points(x, j));
    }
    sum += hi - lo;
  }
  return sum;
}

inline double direct_diameter(const Metric& m, std::uint64_t a) {
  double best = 0.0;
  const auto members = mask_members(a);
  for (int x : members)
    for (int y : members) best = std::max(best, m(x, y));
  return best;
}

struct BrutePhi {
  double phi = kInf;
  std::uint64_t side = 0;
};

/// Minimum sparsity over every nontrivial bipartition, both sides enumerated.
inline BrutePhi brute_phi(const Instance& inst) {
  const int n = inst.num_nodes();
  BrutePhi best;
  auto crossing = [](const Hypergraph& h, std::uint64_t side) {
    double w = 0.0;
    for (const auto& e : h.edges()) {
      bool in = false, out = false;
      for (int v : e.members) ((side >> v) & 1U ? in : out) = true;
      if (in && out) w += e.weight;
    }
    return w;
  };
  for (std::uint64_t side = 1; side + 1 < (std::uint64_t{1} << n); ++side) {
    const double den = crossing(inst.demand, side);
    if (den <= 0.0) continue;
    const double phi = crossing(inst.supply, side) / den;
    if (phi < best.phi) best = {phi, side};
  }
  return best;
}

/// LP optimum by enumerating every basis of active constraints (tiny models only).
/// Returns +inf when infeasible; unboundedness is not detected.
inline double brute_lp(const LpModel& model) {
  const int n = model.num_variables();
  struct Con {
    Eigen::RowVectorXd a;
    double b;
    Relation rel;
  };
  std::vector<Con> cons;
  for (const auto& row : model.rows()) {
    Con c{Eigen::RowVectorXd::Zero(n), row.rhs, row.relation};
    for (auto [j, v] : row.coeffs) c.a[j] += v;
    cons.push_back(c);
  }
  for (int j = 0; j < n; ++j) {
    Con c{Eigen::RowVectorXd::Zero(n), model.lower()[static_cast<std::size_t>(j)], Relation::GreaterEqual};
    c.a[j] = 1.0;
    cons.push_back(c);
  }
  const int k = static_cast<int>(cons.size());
  double best = kInf;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (int i = 0; i < n; ++i) {
        a.row(i) = cons[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])].a;
        b[i] = cons[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      for (const auto& c : cons) {
        const double v = c.a.dot(x);
        const double tol = 1e-9 * (1.0 + std::abs(c.b));
        if (c.rel == Relation::GreaterEqual && v < c.b - tol) return;
        if (c.rel == Relation::LessEqual && v > c.b + tol) return;
        if (c.rel == Relation::Equal && std::abs(v - c.b) > tol) return;
      }
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += model.costs()[static_cast<std::size_t>(j)] * x[j];
      best = std::min(best, obj);
      return;
    }
    for (int i = start; i < k; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

/// Every nonempty subset mask of {0..n-1} with at most `cap` members.
inline std::vector<std::uint64_t> small_subsets(int n, int cap) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m)
    if (std::popcount(m) <= cap) out.push_back(m);
  return out;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace divcut::testing
