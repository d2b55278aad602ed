#include "divcut/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "divcut/errors.hpp"

namespace divcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> unique_sorted(std::span<const int> values) {
  std::vector<int> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_terminals(const std::vector<int>& terminals, int n) {
  if (!terminals.empty() && (terminals.front() < 0 || terminals.back() >= n))
    throw InvalidArgument("terminal outside the node range");
}

// ---------------------------------------------------------------------------
// edge-weighted graphs

struct Arc {
  int to;
  double weight;
  int edge;
};

using ArcLists = std::vector<std::vector<Arc>>;

ArcLists arcs_of(const Hypergraph& g) {
  if (g.rank() > 2) throw InvalidArgument("expected a graph (rank <= 2)");
  ArcLists adj(static_cast<std::size_t>(g.num_nodes()));
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const auto& e = g.edge(i);
    if (e.members.size() != 2) continue;
    const int a = e.members[0], b = e.members[1];
    adj[static_cast<std::size_t>(a)].push_back({b, e.weight, static_cast<int>(i)});
    adj[static_cast<std::size_t>(b)].push_back({a, e.weight, static_cast<int>(i)});
  }
  return adj;
}

Hypergraph complete_graph(const Metric& m) {
  Hypergraph g(m.size());
  for (int x = 0; x < m.size(); ++x)
    for (int y = x + 1; y < m.size(); ++y)
      if (std::isfinite(m(x, y))) g.add_edge({x, y}, m(x, y));
  return g;
}

using Heap = std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>>;

/// Multi-source Dijkstra: `dist` holds initial labels; pred_edge/pred_node record improvements.
void dijkstra(const ArcLists& adj, std::vector<double>& dist, std::vector<int>& pred_node,
              std::vector<int>& pred_edge) {
  Heap heap;
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (std::isfinite(dist[v])) heap.emplace(dist[v], static_cast<int>(v));
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (const Arc& a : adj[static_cast<std::size_t>(v)]) {
      const double nd = d + a.weight;
      if (nd < dist[static_cast<std::size_t>(a.to)]) {
        dist[static_cast<std::size_t>(a.to)] = nd;
        pred_node[static_cast<std::size_t>(a.to)] = v;
        pred_edge[static_cast<std::size_t>(a.to)] = a.edge;
        heap.emplace(nd, a.to);
      }
    }
  }
}

SteinerSolution finish_edges(const Hypergraph& g, std::set<int> edges, const std::vector<int>& terminals) {
  SteinerSolution s;
  s.edges.assign(edges.begin(), edges.end());
  std::set<int> nodes(terminals.begin(), terminals.end());
  for (int e : s.edges) {
    s.cost += g.edge(static_cast<std::size_t>(e)).weight;
    for (int v : g.edge(static_cast<std::size_t>(e)).members) nodes.insert(v);
  }
  s.nodes.assign(nodes.begin(), nodes.end());
  s.feasible = is_connected_subhypergraph(g, s.edges, terminals);
  return s;
}

int find_root(std::vector<int>& parent, int v) {
  while (parent[static_cast<std::size_t>(v)] != v)
    v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
  return v;
}

// ---------------------------------------------------------------------------
// node-weighted graphs

using AdjLists = std::vector<std::vector<int>>;

/// Dijkstra where entering node u costs enter[u]; the source's own cost is not counted.
void node_dijkstra(const AdjLists& adj, const std::vector<double>& enter, int source, std::vector<double>& dist,
                   std::vector<int>& pred) {
  dist.assign(adj.size(), kInf);
  pred.assign(adj.size(), -1);
  dist[static_cast<std::size_t>(source)] = 0.0;
  Heap heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(v)]) continue;
    for (int u : adj[static_cast<std::size_t>(v)]) {
      const double nd = d + enter[static_cast<std::size_t>(u)];
      if (nd < dist[static_cast<std::size_t>(u)]) {
        dist[static_cast<std::size_t>(u)] = nd;
        pred[static_cast<std::size_t>(u)] = v;
        heap.emplace(nd, u);
      }
    }
  }
}

bool terminals_connected(const AdjLists& adj, const std::vector<int>& terminals,
                         const std::vector<char>* allowed = nullptr) {
  if (terminals.size() <= 1) return true;
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{terminals.front()};
  seen[static_cast<std::size_t>(terminals.front())] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (seen[static_cast<std::size_t>(u)]) continue;
      if (allowed && !(*allowed)[static_cast<std::size_t>(u)]) continue;
      seen[static_cast<std::size_t>(u)] = 1;
      stack.push_back(u);
    }
  }
  return std::all_of(terminals.begin(), terminals.end(), [&](int t) { return seen[static_cast<std::size_t>(t)] != 0; });
}

SteinerSolution node_solution(const NodeWeightedGraph& g, const std::vector<char>& chosen) {
  SteinerSolution s;
  for (int v = 0; v < g.n; ++v)
    if (chosen[static_cast<std::size_t>(v)]) {
      s.nodes.push_back(v);
      s.cost += g.weight[static_cast<std::size_t>(v)];
    }
  s.feasible = true;
  return s;
}

void validate(const NodeWeightedGraph& g) {
  if (static_cast<int>(g.weight.size()) != g.n) throw InvalidArgument("one weight per node expected");
  for (double w : g.weight)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("node weights must be finite and nonnegative");
  for (auto [a, b] : g.edges)
    if (a < 0 || b < 0 || a >= g.n || b >= g.n) throw InvalidArgument("edge endpoint outside the node range");
}

}  // namespace

std::vector<std::vector<int>> NodeWeightedGraph::adjacency() const {
  AdjLists adj(static_cast<std::size_t>(n));
  for (auto [a, b] : edges) {
    if (a == b) continue;
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

// ---------------------------------------------------------------------------

SteinerSolution steiner_tree_2approx(const Hypergraph& graph, std::span<const int> terminal_span) {
  const auto terminals = unique_sorted(terminal_span);
  check_terminals(terminals, graph.num_nodes());
  if (terminals.size() <= 1) return finish_edges(graph, {}, terminals);
  const auto adj = arcs_of(graph);
  const std::size_t n = adj.size();
  const std::size_t k = terminals.size();

  std::vector<std::vector<double>> dist(k, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> pred_node(k, std::vector<int>(n, -1)), pred_edge(k, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < k; ++i) {
    dist[i][static_cast<std::size_t>(terminals[i])] = 0.0;
    dijkstra(adj, dist[i], pred_node[i], pred_edge[i]);
  }

  // Prim on the terminal distance closure
  std::vector<char> in_tree(k, 0);
  std::vector<double> best(k, kInf);
  std::vector<int> link(k, -1);
  best[0] = 0.0;
  std::set<int> edges;
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t pick = k;
    for (std::size_t i = 0; i < k; ++i)
      if (!in_tree[i] && (pick == k || best[i] < best[pick])) pick = i;
    if (!std::isfinite(best[pick])) throw Infeasible("steiner: terminals are not mutually reachable");
    in_tree[pick] = 1;
    if (link[pick] >= 0) {
      // expand the closure edge into its shortest path
      const auto src = static_cast<std::size_t>(link[pick]);
      for (int v = terminals[pick]; v != terminals[src]; v = pred_node[src][static_cast<std::size_t>(v)])
        edges.insert(pred_edge[src][static_cast<std::size_t>(v)]);
    }
    for (std::size_t i = 0; i < k; ++i)
      if (!in_tree[i] && dist[pick][static_cast<std::size_t>(terminals[i])] < best[i]) {
        best[i] = dist[pick][static_cast<std::size_t>(terminals[i])];
        link[i] = static_cast<int>(pick);
      }
  }

  // re-span the union with Kruskal, then strip non-terminal leaves
  std::vector<int> order(edges.begin(), edges.end());
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return graph.edge(static_cast<std::size_t>(a)).weight < graph.edge(static_cast<std::size_t>(b)).weight;
  });
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> tree;
  for (int e : order) {
    const auto& m = graph.edge(static_cast<std::size_t>(e)).members;
    const int a = find_root(parent, m[0]), b = find_root(parent, m[1]);
    if (a == b) continue;
    parent[static_cast<std::size_t>(a)] = b;
    tree.push_back(e);
  }
  std::vector<char> is_terminal(n, 0);
  for (int t : terminals) is_terminal[static_cast<std::size_t>(t)] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> degree(n, 0);
    for (int e : tree)
      for (int v : graph.edge(static_cast<std::size_t>(e)).members) ++degree[static_cast<std::size_t>(v)];
    std::vector<int> kept;
    for (int e : tree) {
      const auto& m = graph.edge(static_cast<std::size_t>(e)).members;
      const bool leaf = (degree[static_cast<std::size_t>(m[0])] == 1 && !is_terminal[static_cast<std::size_t>(m[0])]) ||
                        (degree[static_cast<std::size_t>(m[1])] == 1 && !is_terminal[static_cast<std::size_t>(m[1])]);
      if (leaf) {
        changed = true;
      } else {
        kept.push_back(e);
      }
    }
    tree = std::move(kept);
  }
  return finish_edges(graph, std::set<int>(tree.begin(), tree.end()), terminals);
}

SteinerSolution steiner_tree_2approx(const Metric& m, std::span<const int> terminals) {
  return steiner_tree_2approx(complete_graph(m), terminals);
}

SteinerSolution steiner_tree_exact(const Hypergraph& graph, std::span<const int> terminal_span,
                                   const SteinerCaps& caps) {
  const auto terminals = unique_sorted(terminal_span);
  check_terminals(terminals, graph.num_nodes());
  if (terminals.size() <= 1) return finish_edges(graph, {}, terminals);
  if (static_cast<int>(terminals.size()) > caps.max_terminals)
    throw CapExceeded("steiner_tree_exact: " + std::to_string(terminals.size()) + " terminals exceed the cap " +
                      std::to_string(caps.max_terminals));
  const auto adj = arcs_of(graph);
  const std::size_t n = adj.size();
  const std::size_t k = terminals.size();
  const std::size_t full = (std::size_t{1} << k) - 1;

  // back pointers: split (submask) or arc (previous node, edge)
  struct Back {
    int split = 0;
    int prev = -1;
    int edge = -1;
  };
  std::vector<std::vector<double>> dp(full + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<Back>> back(full + 1, std::vector<Back>(n));
  for (std::size_t mask = 1; mask <= full; ++mask) {
    auto& cur = dp[mask];
    if ((mask & (mask - 1)) == 0) {
      cur[static_cast<std::size_t>(terminals[static_cast<std::size_t>(std::countr_zero(mask))])] = 0.0;
    } else {
      const std::size_t low = mask & (~mask + 1);
      for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
        if (!(sub & low)) continue;
        const auto& a = dp[sub];
        const auto& b = dp[mask ^ sub];
        for (std::size_t v = 0; v < n; ++v) {
          const double c = a[v] + b[v];
          if (c < cur[v]) {
            cur[v] = c;
            back[mask][v] = {static_cast<int>(sub), -1, -1};
          }
        }
      }
    }
    std::vector<int> pred_node(n, -1), pred_edge(n, -1);
    dijkstra(adj, cur, pred_node, pred_edge);
    for (std::size_t v = 0; v < n; ++v)
      if (pred_node[v] >= 0) back[mask][v] = {0, pred_node[v], pred_edge[v]};
  }
  const int root = terminals.front();
  if (!std::isfinite(dp[full][static_cast<std::size_t>(root)]))
    throw Infeasible("steiner: terminals are not mutually reachable");

  std::set<int> edges;
  std::vector<std::pair<std::size_t, int>> stack{{full, root}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    const Back& b = back[mask][static_cast<std::size_t>(v)];
    if (b.prev >= 0) {
      edges.insert(b.edge);
      stack.emplace_back(mask, b.prev);
    } else if (b.split != 0) {
      stack.emplace_back(static_cast<std::size_t>(b.split), v);
      stack.emplace_back(mask ^ static_cast<std::size_t>(b.split), v);
    }
  }
  return finish_edges(graph, std::move(edges), terminals);
}

SteinerSolution steiner_tree_exact(const Metric& m, std::span<const int> terminals, const SteinerCaps& caps) {
  return steiner_tree_exact(complete_graph(m), terminals, caps);
}

double steiner_cost(const Metric& m, std::span<const int> terminal_span, const SteinerCaps& caps) {
  const auto terminals = unique_sorted(terminal_span);
  check_terminals(terminals, m.size());
  const std::size_t k = terminals.size();
  if (k <= 1) return 0.0;
  if (k == 2) {
    const double d = m(terminals[0], terminals[1]);
    if (!std::isfinite(d)) throw Infeasible("steiner: terminals are not mutually reachable");
    return d;
  }
  if (static_cast<int>(k) > caps.max_terminals)
    throw CapExceeded("steiner_cost: " + std::to_string(k) + " terminals exceed the cap " +
                      std::to_string(caps.max_terminals));
  const auto& d = m.matrix();
  const auto n = static_cast<std::size_t>(m.size());
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<Eigen::VectorXd> dp(full + 1);
  for (std::size_t i = 0; i < k; ++i) dp[std::size_t{1} << i] = d.col(terminals[i]);
  Eigen::VectorXd split(static_cast<Eigen::Index>(n));
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;
    split.setConstant(kInf);
    const std::size_t low = mask & (~mask + 1);
    for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask)
      if (sub & low) split = split.cwiseMin(dp[sub] + dp[mask ^ sub]);
    if (mask == full) {
      // the root may be any node: min over v of split(v) is the answer
      const double best = split.minCoeff();
      if (!std::isfinite(best)) throw Infeasible("steiner: terminals are not mutually reachable");
      return best;
    }
    Eigen::VectorXd relaxed(static_cast<Eigen::Index>(n));
    for (std::size_t u = 0; u < n; ++u) relaxed[static_cast<Eigen::Index>(u)] = (split + d.col(static_cast<Eigen::Index>(u))).minCoeff();
    dp[mask] = relaxed;
  }
  return kInf;  // unreachable
}

// ---------------------------------------------------------------------------

SteinerSolution nstp_klein_ravi(const NodeWeightedGraph& g, std::span<const int> terminal_span) {
  validate(g);
  const auto terminals = unique_sorted(terminal_span);
  check_terminals(terminals, g.n);
  const auto adj = g.adjacency();
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<char> selected(n, 0);
  for (int t : terminals) selected[static_cast<std::size_t>(t)] = 1;
  if (terminals.size() <= 1) return node_solution(g, selected);
  if (!terminals_connected(adj, terminals)) throw Infeasible("nstp: terminals are not mutually reachable");

  std::vector<double> dist;
  std::vector<int> pred;
  std::vector<int> comp(n, -1);
  auto label_components = [&]() {
    std::fill(comp.begin(), comp.end(), -1);
    int count = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (!selected[s] || comp[s] >= 0) continue;
      std::vector<int> stack{static_cast<int>(s)};
      comp[s] = count;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : adj[static_cast<std::size_t>(v)])
          if (selected[static_cast<std::size_t>(u)] && comp[static_cast<std::size_t>(u)] < 0) {
            comp[static_cast<std::size_t>(u)] = count;
            stack.push_back(u);
          }
      }
      ++count;
    }
    return count;
  };

  int components = label_components();
  while (components > 1) {
    std::vector<double> enter(n);
    for (std::size_t v = 0; v < n; ++v) enter[v] = selected[v] ? 0.0 : g.weight[v];

    double best_ratio = kInf;
    int best_center = -1;
    int best_k = 0;
    for (int v = 0; v < g.n; ++v) {
      node_dijkstra(adj, enter, v, dist, pred);
      std::vector<double> to_comp(static_cast<std::size_t>(components), kInf);
      for (std::size_t u = 0; u < n; ++u)
        if (comp[u] >= 0) to_comp[static_cast<std::size_t>(comp[u])] = std::min(to_comp[static_cast<std::size_t>(comp[u])], dist[u]);
      std::sort(to_comp.begin(), to_comp.end());
      double sum = enter[static_cast<std::size_t>(v)];
      for (int k = 1; k <= components; ++k) {
        const double dk = to_comp[static_cast<std::size_t>(k - 1)];
        if (!std::isfinite(dk)) break;
        sum += dk;
        if (k < 2) continue;
        const double ratio = sum / k;
        if (ratio < best_ratio) {  // strict: earlier (v, k) wins ties
          best_ratio = ratio;
          best_center = v;
          best_k = k;
        }
      }
    }
    if (best_center < 0) throw Infeasible("nstp: terminals are not mutually reachable");

    // merge the spider centred at best_center
    node_dijkstra(adj, enter, best_center, dist, pred);
    std::vector<std::pair<double, int>> targets;  // (distance, representative node) per component
    std::vector<double> comp_dist(static_cast<std::size_t>(components), kInf);
    std::vector<int> comp_node(static_cast<std::size_t>(components), -1);
    for (std::size_t u = 0; u < n; ++u) {
      if (comp[u] < 0) continue;
      const auto c = static_cast<std::size_t>(comp[u]);
      if (dist[u] < comp_dist[c]) {
        comp_dist[c] = dist[u];
        comp_node[c] = static_cast<int>(u);
      }
    }
    for (int c = 0; c < components; ++c)
      if (std::isfinite(comp_dist[static_cast<std::size_t>(c)]))
        targets.emplace_back(comp_dist[static_cast<std::size_t>(c)], comp_node[static_cast<std::size_t>(c)]);
    std::sort(targets.begin(), targets.end());
    selected[static_cast<std::size_t>(best_center)] = 1;
    for (int i = 0; i < best_k; ++i)
      for (int v = targets[static_cast<std::size_t>(i)].second; v >= 0; v = pred[static_cast<std::size_t>(v)])
        selected[static_cast<std::size_t>(v)] = 1;
    const int next = label_components();
    if (next >= components) throw Error("nstp: Klein-Ravi made no progress");
    components = next;
  }

  // drop non-terminals that are not needed, heaviest first
  std::vector<char> is_terminal(n, 0);
  for (int t : terminals) is_terminal[static_cast<std::size_t>(t)] = 1;
  std::vector<int> order;
  for (std::size_t v = 0; v < n; ++v)
    if (selected[v] && !is_terminal[v]) order.push_back(static_cast<int>(v));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return g.weight[static_cast<std::size_t>(a)] > g.weight[static_cast<std::size_t>(b)];
  });
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v : order) {
      if (!selected[static_cast<std::size_t>(v)]) continue;
      selected[static_cast<std::size_t>(v)] = 0;
      std::vector<int> nodes;
      for (std::size_t u = 0; u < n; ++u)
        if (selected[u]) nodes.push_back(static_cast<int>(u));
      // the remaining set must stay connected as a whole
      if (terminals_connected(adj, nodes, &selected)) {
        changed = true;
      } else {
        selected[static_cast<std::size_t>(v)] = 1;
      }
    }
  }
  return node_solution(g, selected);
}

SteinerSolution nstp_exact(const NodeWeightedGraph& g, std::span<const int> terminal_span, const SteinerCaps& caps) {
  validate(g);
  const auto terminals = unique_sorted(terminal_span);
  check_terminals(terminals, g.n);
  if (g.n > caps.max_enum_nodes || g.n > 63)
    throw CapExceeded("nstp_exact: " + std::to_string(g.n) + " nodes exceed the cap " +
                      std::to_string(caps.max_enum_nodes));
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<std::uint64_t> adj(n, 0);
  for (auto [a, b] : g.edges) {
    if (a == b) continue;
    adj[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    adj[static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
  }
  std::uint64_t base = 0;
  for (int t : terminals) base |= std::uint64_t{1} << t;
  std::vector<int> others;
  for (int v = 0; v < g.n; ++v)
    if (!((base >> v) & 1U)) others.push_back(v);

  auto connected = [&](std::uint64_t set) {
    if (set == 0) return true;
    std::uint64_t seen = set & (~set + 1);
    std::uint64_t frontier = seen;
    while (frontier != 0) {
      const int v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const std::uint64_t fresh = adj[static_cast<std::size_t>(v)] & set & ~seen;
      seen |= fresh;
      frontier |= fresh;
    }
    return seen == set;
  };

  double best = kInf;
  std::uint64_t best_set = 0;
  const std::uint64_t count = std::uint64_t{1} << others.size();
  for (std::uint64_t sub = 0; sub < count; ++sub) {
    std::uint64_t set = base;
    double cost = 0.0;
    for (int v : terminals) cost += g.weight[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < others.size(); ++i)
      if ((sub >> i) & 1U) {
        set |= std::uint64_t{1} << others[i];
        cost += g.weight[static_cast<std::size_t>(others[i])];
      }
    if (cost >= best) continue;
    if (!connected(set)) continue;
    best = cost;
    best_set = set;
  }
  if (!std::isfinite(best)) throw Infeasible("nstp: terminals are not mutually reachable");
  std::vector<char> chosen(n, 0);
  for (std::size_t v = 0; v < n; ++v) chosen[v] = static_cast<char>((best_set >> v) & 1U);
  return node_solution(g, chosen);
}

SteinerSolution nstp_dreyfus_wagner(const NodeWeightedGraph& g, std::span<const int> terminal_span,
                                    const SteinerCaps& caps) {
  validate(g);
  const auto terminals = unique_sorted(terminal_span);
  check_terminals(terminals, g.n);
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<char> chosen(n, 0);
  for (int t : terminals) chosen[static_cast<std::size_t>(t)] = 1;
  if (terminals.size() <= 1) return node_solution(g, chosen);
  if (static_cast<int>(terminals.size()) > caps.max_terminals)
    throw CapExceeded("nstp_dreyfus_wagner: " + std::to_string(terminals.size()) + " terminals exceed the cap " +
                      std::to_string(caps.max_terminals));
  const auto adj = g.adjacency();
  const std::size_t k = terminals.size();
  const std::size_t full = (std::size_t{1} << k) - 1;
  const auto& w = g.weight;

  struct Back {
    int split = 0;
    int prev = -1;
  };
  std::vector<std::vector<double>> dp(full + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<Back>> back(full + 1, std::vector<Back>(n));
  for (std::size_t mask = 1; mask <= full; ++mask) {
    auto& cur = dp[mask];
    if ((mask & (mask - 1)) == 0) {
      const auto t = static_cast<std::size_t>(terminals[static_cast<std::size_t>(std::countr_zero(mask))]);
      cur[t] = w[t];
    } else {
      const std::size_t low = mask & (~mask + 1);
      for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
        if (!(sub & low)) continue;
        for (std::size_t v = 0; v < n; ++v) {
          const double c = dp[sub][v] + dp[mask ^ sub][v] - w[v];
          if (c < cur[v]) {
            cur[v] = c;
            back[mask][v] = {static_cast<int>(sub), -1};
          }
        }
      }
    }
    Heap heap;
    for (std::size_t v = 0; v < n; ++v)
      if (std::isfinite(cur[v])) heap.emplace(cur[v], static_cast<int>(v));
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > cur[static_cast<std::size_t>(v)]) continue;
      for (int u : adj[static_cast<std::size_t>(v)]) {
        const double nd = d + w[static_cast<std::size_t>(u)];
        if (nd < cur[static_cast<std::size_t>(u)]) {
          cur[static_cast<std::size_t>(u)] = nd;
          back[mask][static_cast<std::size_t>(u)] = {0, v};
          heap.emplace(nd, u);
        }
      }
    }
  }
  const int root = terminals.front();
  if (!std::isfinite(dp[full][static_cast<std::size_t>(root)]))
    throw Infeasible("nstp: terminals are not mutually reachable");
  std::vector<std::pair<std::size_t, int>> stack{{full, root}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    chosen[static_cast<std::size_t>(v)] = 1;
    const Back& b = back[mask][static_cast<std::size_t>(v)];
    if (b.prev >= 0) {
      stack.emplace_back(mask, b.prev);
    } else if (b.split != 0) {
      stack.emplace_back(static_cast<std::size_t>(b.split), v);
      stack.emplace_back(mask ^ static_cast<std::size_t>(b.split), v);
    }
  }
  return node_solution(g, chosen);
}

// ---------------------------------------------------------------------------

HspReduction hsp_reduce(const Hypergraph& h) {
  HspReduction r;
  r.original_n = h.num_nodes();
  r.graph.n = h.num_nodes() + static_cast<int>(h.num_edges());
  r.graph.weight.assign(static_cast<std::size_t>(r.graph.n), 0.0);
  for (std::size_t i = 0; i < h.num_edges(); ++i) {
    const int aux = h.num_nodes() + static_cast<int>(i);
    r.edge_node_of.push_back(aux);
    r.graph.weight[static_cast<std::size_t>(aux)] = h.edge(i).weight;
    for (int v : h.edge(i).members) r.graph.edges.emplace_back(v, aux);
  }
  return r;
}

bool is_connected_subhypergraph(const Hypergraph& h, std::span<const int> edges, std::span<const int> terminals) {
  const auto terms = unique_sorted(terminals);
  if (edges.empty()) return terms.size() <= 1;
  std::vector<int> parent(static_cast<std::size_t>(h.num_nodes()));
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<char> covered(static_cast<std::size_t>(h.num_nodes()), 0);
  for (int e : edges) {
    if (e < 0 || static_cast<std::size_t>(e) >= h.num_edges()) return false;
    const auto& m = h.edge(static_cast<std::size_t>(e)).members;
    for (int v : m) {
      covered[static_cast<std::size_t>(v)] = 1;
      parent[static_cast<std::size_t>(find_root(parent, v))] = find_root(parent, m.front());
    }
  }
  int root = -1;
  for (int v = 0; v < h.num_nodes(); ++v) {
    if (!covered[static_cast<std::size_t>(v)]) continue;
    const int r = find_root(parent, v);
    if (root < 0) root = r;
    if (r != root) return false;
  }
  return std::all_of(terms.begin(), terms.end(), [&](int t) { return covered[static_cast<std::size_t>(t)] != 0; });
}

SteinerSolution hsp_solve(const Hypergraph& h, std::span<const int> terminal_span, EvalMode mode,
                          const SteinerCaps& caps) {
  const auto terminals = unique_sorted(terminal_span);
  check_terminals(terminals, h.num_nodes());
  if (terminals.size() <= 1) {
    SteinerSolution s;
    s.nodes = terminals;
    s.feasible = true;
    return s;
  }
  const HspReduction r = hsp_reduce(h);
  const SteinerSolution tree = mode == EvalMode::Exact ? nstp_dreyfus_wagner(r.graph, terminals, caps)
                                                       : nstp_klein_ravi(r.graph, terminals);
  SteinerSolution s;
  std::set<int> nodes;
  for (int v : tree.nodes) {
    if (v < r.original_n) continue;
    const int e = v - r.original_n;
    s.edges.push_back(e);
    s.cost += h.edge(static_cast<std::size_t>(e)).weight;
    for (int u : h.edge(static_cast<std::size_t>(e)).members) nodes.insert(u);
  }
  s.nodes.assign(nodes.begin(), nodes.end());
  s.feasible = is_connected_subhypergraph(h, s.edges, terminals);
  return s;
}

Metric metric_closure(const Hypergraph& h) {
  const HspReduction r = hsp_reduce(h);
  const auto adj = r.graph.adjacency();
  const int n = h.num_nodes();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, kInf);
  std::vector<double> dist;
  std::vector<int> pred;
  for (int s = 0; s < n; ++s) {
    node_dijkstra(adj, r.graph.weight, s, dist, pred);
    for (int t = 0; t < n; ++t) d(s, t) = dist[static_cast<std::size_t>(t)];
  }
  // symmetric up to summation order; take the smaller direction
  for (int x = 0; x < n; ++x) {
    d(x, x) = 0.0;
    for (int y = x + 1; y < n; ++y) d(x, y) = d(y, x) = std::min(d(x, y), d(y, x));
  }
  return Metric(std::move(d), MetricCheck::Basic);
}

}  // namespace divcut
