#include "divcut/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "divcut/errors.hpp"
#include "divcut/random.hpp"

namespace divcut {

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "random") return GeneratorKind::RandomHypergraph;
  if (name == "path") return GeneratorKind::Path;
  if (name == "grid") return GeneratorKind::Grid;
  if (name == "expander") return GeneratorKind::Expander;
  if (name == "graph-hyper") return GeneratorKind::GraphHypergraph;
  if (name == "hyper-uniform") return GeneratorKind::HypergraphUniform;
  throw InvalidArgument("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::RandomHypergraph: return "random";
    case GeneratorKind::Path: return "path";
    case GeneratorKind::Grid: return "grid";
    case GeneratorKind::Expander: return "expander";
    case GeneratorKind::GraphHypergraph: return "graph-hyper";
    case GeneratorKind::HypergraphUniform: return "hyper-uniform";
  }
  return "unknown";
}

namespace {

class Draw {
 public:
  Draw(const GeneratorSpec& spec, Rng& rng) : spec_(spec), rng_(rng) {}

  double weight() {
    if (spec_.integer_weights) {
      const auto lo = static_cast<long long>(std::ceil(spec_.weight_lo));
      const auto hi = static_cast<long long>(std::floor(spec_.weight_hi));
      return static_cast<double>(lo + static_cast<long long>(uniform_below(rng_, static_cast<std::uint64_t>(hi - lo + 1))));
    }
    return spec_.weight_lo + (spec_.weight_hi - spec_.weight_lo) * uniform01(rng_);
  }

  int node(int n) { return static_cast<int>(uniform_below(rng_, static_cast<std::uint64_t>(n))); }

  /// Random edge of cardinality in [2, max_rank].
  std::vector<int> edge(int n, int max_rank) {
    const int size = 2 + static_cast<int>(uniform_below(rng_, static_cast<std::uint64_t>(max_rank - 1)));
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    shuffle(all.begin(), all.end(), rng_);
    all.resize(static_cast<std::size_t>(size));
    return all;
  }

  Rng& rng() { return rng_; }

 private:
  const GeneratorSpec& spec_;
  Rng& rng_;
};

int find(std::vector<int>& parent, int v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

/// Adds random 2-edges between components until the hypergraph is connected.
void connect(Hypergraph& h, Draw& draw) {
  const int n = h.num_nodes();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : h.edges())
    for (int v : e.members) parent[find(parent, v)] = find(parent, e.members.front());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  shuffle(order.begin(), order.end(), draw.rng());
  // invariant: order[0..i) lies in one component
  for (std::size_t i = 1; i < order.size(); ++i) {
    const int a = order[i];
    const int b = order[uniform_below(draw.rng(), i)];
    if (find(parent, a) == find(parent, b)) continue;
    h.add_edge({a, b}, draw.weight());
    parent[find(parent, a)] = find(parent, b);
  }
}

Hypergraph random_hypergraph(int n, int m, int max_rank, Draw& draw) {
  Hypergraph h(n);
  for (int i = 0; i < m; ++i) h.add_edge(draw.edge(n, max_rank), draw.weight());
  return h;
}

Hypergraph random_regular(int n, int d, Draw& draw) {
  if (d < 1 || d >= n || (n * d) % 2 != 0)
    throw InvalidArgument("expander: need 1 <= d < n and n*d even");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    shuffle(stubs.begin(), stubs.end(), draw.rng());
    std::set<std::pair<int, int>> pairs;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      int a = stubs[i], b = stubs[i + 1];
      if (a == b) { ok = false; break; }
      if (a > b) std::swap(a, b);
      if (!pairs.insert({a, b}).second) { ok = false; break; }
    }
    if (!ok) continue;
    Hypergraph h(n);
    for (auto [a, b] : pairs) h.add_edge({a, b}, draw.weight());
    // keep only connected draws
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    for (auto [a, b] : pairs) parent[find(parent, a)] = find(parent, b);
    int roots = 0;
    for (int v = 0; v < n; ++v) roots += find(parent, v) == v;
    if (roots == 1) return h;
  }
  throw InvalidArgument("expander: failed to draw a connected regular graph");
}

}  // namespace

Instance generate(const GeneratorSpec& spec, std::uint64_t seed) {
  const int n = spec.kind == GeneratorKind::Grid ? spec.rows * spec.cols : spec.n;
  if (n < 2) throw InvalidArgument("generator needs at least 2 nodes");
  if (spec.weight_lo < 0.0 || spec.weight_hi < spec.weight_lo)
    throw InvalidArgument("weight range must satisfy 0 <= lo <= hi");
  if (spec.integer_weights && std::floor(spec.weight_hi) < std::ceil(spec.weight_lo))
    throw InvalidArgument("integer weight range is empty");
  const bool needs_rank = spec.kind == GeneratorKind::RandomHypergraph ||
                          spec.kind == GeneratorKind::GraphHypergraph ||
                          spec.kind == GeneratorKind::HypergraphUniform;
  if (needs_rank && (spec.max_rank < 2 || spec.max_rank > n))
    throw InvalidArgument("max rank must lie in [2, n]");
  if (needs_rank && spec.m < 1) throw InvalidArgument("edge count must be positive");

  Rng rng(seed);
  Draw draw(spec, rng);
  switch (spec.kind) {
    case GeneratorKind::Path: {
      Hypergraph supply(n);
      for (int v = 0; v + 1 < n; ++v) supply.add_edge({v, v + 1}, 1.0);
      return make_instance(std::move(supply), uniform_demand(n));
    }
    case GeneratorKind::Grid: {
      if (spec.rows < 1 || spec.cols < 1) throw InvalidArgument("grid needs positive dimensions");
      Hypergraph supply(n);
      for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c) {
          const int v = r * spec.cols + c;
          if (c + 1 < spec.cols) supply.add_edge({v, v + 1}, 1.0);
          if (r + 1 < spec.rows) supply.add_edge({v, v + spec.cols}, 1.0);
        }
      return make_instance(std::move(supply), uniform_demand(n));
    }
    case GeneratorKind::Expander:
      return make_instance(random_regular(n, spec.degree, draw), uniform_demand(n));
    case GeneratorKind::RandomHypergraph: {
      Hypergraph supply = random_hypergraph(n, spec.m, spec.max_rank, draw);
      connect(supply, draw);
      Hypergraph demand = random_hypergraph(n, spec.m, spec.max_rank, draw);
      if (demand.total_weight() <= 0.0) demand.add_edge({0, 1}, 1.0);
      return make_instance(std::move(supply), std::move(demand));
    }
    case GeneratorKind::GraphHypergraph: {
      Hypergraph supply = random_hypergraph(n, spec.m, 2, draw);
      connect(supply, draw);
      Hypergraph demand = random_hypergraph(n, spec.m, spec.max_rank, draw);
      if (demand.total_weight() <= 0.0) demand.add_edge({0, 1}, 1.0);
      return make_instance(std::move(supply), std::move(demand));
    }
    case GeneratorKind::HypergraphUniform: {
      Hypergraph supply = random_hypergraph(n, spec.m, spec.max_rank, draw);
      connect(supply, draw);
      return make_instance(std::move(supply), uniform_demand(n));
    }
  }
  throw InvalidArgument("unknown generator kind");
}

}  // namespace divcut
