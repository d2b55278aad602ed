#include <gtest/gtest.h>

#include "divcut/errors.hpp"
#include "divcut/steiner.hpp"
#include "support.hpp"

using namespace divcut;
namespace dt = divcut::testing;

namespace {

Hypergraph unit_graph(int n, std::vector<std::pair<int, int>> edges) {
  Hypergraph g(n);
  for (auto [u, v] : edges) g.add_edge({u, v}, 1.0);
  return g;
}

std::uint64_t mask_of(const std::vector<int>& v) {
  std::uint64_t m = 0;
  for (int x : v) m |= std::uint64_t{1} << x;
  return m;
}

/// Cheapest connected node superset of the terminals, by enumeration (independent of the library).
double brute_nstp(const NodeWeightedGraph& g, std::uint64_t terminals) {
  const auto adj = g.adjacency();
  double best = dt::kInf;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.n); ++s) {
    if ((s & terminals) != terminals || s == 0) continue;
    double w = 0.0;
    for (int v : dt::mask_members(s)) w += g.weight[static_cast<std::size_t>(v)];
    if (w >= best) continue;
    const int start = std::countr_zero(s);
    std::uint64_t seen = std::uint64_t{1} << start;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : adj[static_cast<std::size_t>(v)])
        if ((s >> u & 1U) && !(seen >> u & 1U)) {
          seen |= std::uint64_t{1} << u;
          stack.push_back(u);
        }
    }
    if (seen == s) best = w;
  }
  return best;
}

Hypergraph random_graph(Rng& rng, int n, double p) {
  Hypergraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) g.add_edge({u, v}, dt::uniform_int(rng, 1, 9));
  for (int v = 1; v < n; ++v) g.add_edge({dt::uniform_int(rng, 0, v - 1), v}, dt::uniform_int(rng, 5, 12));
  return g;
}

std::vector<int> random_terminals(Rng& rng, int n, int k) {
  std::vector<int> nodes(static_cast<std::size_t>(n));
  std::iota(nodes.begin(), nodes.end(), 0);
  shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(static_cast<std::size_t>(k));
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

}  // namespace

TEST(GraphSteiner, Examples) {
  const Hypergraph path = unit_graph(3, {{0, 1}, {1, 2}});
  const Hypergraph k3 = unit_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const Hypergraph star = unit_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  const Hypergraph k4 = unit_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  const std::vector<int> ends{0, 2}, all3{0, 1, 2}, leaves{1, 2, 3}, all4{0, 1, 2, 3}, one{1};
  EXPECT_DOUBLE_EQ(steiner_tree_2approx(path, ends).cost, 2.0);
  EXPECT_DOUBLE_EQ(steiner_tree_2approx(k3, all3).cost, 2.0);
  EXPECT_DOUBLE_EQ(steiner_tree_2approx(star, leaves).cost, 3.0);
  EXPECT_DOUBLE_EQ(steiner_tree_exact(path, ends).cost, 2.0);
  EXPECT_DOUBLE_EQ(steiner_tree_exact(k4, all4).cost, 3.0);
  EXPECT_DOUBLE_EQ(steiner_tree_exact(k4, one).cost, 0.0);
  EXPECT_DOUBLE_EQ(steiner_tree_2approx(k4, one).cost, 0.0);
  const Hypergraph split = unit_graph(3, {{0, 1}});
  EXPECT_THROW(steiner_tree_exact(split, ends), Infeasible);
  EXPECT_THROW(steiner_tree_2approx(split, ends), Infeasible);
}

TEST(GraphSteiner, ExactMatchesBruteAndApproxWithinTwo) {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const int n = dt::uniform_int(rng, 3, 9);
    const Hypergraph g = random_graph(rng, n, 0.3);
    if (g.num_edges() > 20) continue;
    const auto terms = random_terminals(rng, n, dt::uniform_int(rng, 2, std::min(n, 5)));
    const auto exact = steiner_tree_exact(g, terms);
    const auto approx = steiner_tree_2approx(g, terms);
    ASSERT_TRUE(exact.feasible);
    ASSERT_TRUE(approx.feasible);
    ASSERT_TRUE(is_connected_subhypergraph(g, approx.edges, terms));
    ASSERT_EQ(exact.cost, dt::brute_hsp(g, mask_of(terms)));
    ASSERT_LE(approx.cost, 2.0 * exact.cost + 1e-9);
    ASSERT_GE(approx.cost, exact.cost - 1e-9);
  }
}

TEST(GraphSteiner, MetricVersionsAgreeWithBrute) {
  Rng rng(32);
  for (int t = 0; t < 15; ++t) {
    const Metric m = dt::random_metric(rng, 7);
    const auto terms = random_terminals(rng, 7, 4);
    const double brute = dt::brute_metric_steiner(m, mask_of(terms));
    EXPECT_NEAR(steiner_tree_exact(m, terms).cost, brute, 1e-9);
    EXPECT_NEAR(steiner_cost(m, terms), brute, 1e-9);
    EXPECT_LE(steiner_tree_2approx(m, terms).cost, 2 * brute + 1e-9);
  }
}

TEST(GraphSteiner, Caps) {
  const Hypergraph g = unit_graph(20, {});
  std::vector<int> terms(15);
  std::iota(terms.begin(), terms.end(), 0);
  EXPECT_THROW(steiner_tree_exact(g, terms), CapExceeded);
}

TEST(NodeWeighted, KleinRaviExamples) {
  NodeWeightedGraph g{3, {0, 0, 3}, {{0, 2}, {1, 2}}};
  const std::vector<int> ab{0, 1};
  const auto kr = nstp_klein_ravi(g, ab);
  EXPECT_DOUBLE_EQ(kr.cost, 3.0);
  EXPECT_EQ(kr.nodes, (std::vector<int>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(nstp_exact(g, ab).cost, 3.0);
  EXPECT_DOUBLE_EQ(nstp_dreyfus_wagner(g, ab).cost, 3.0);

  NodeWeightedGraph free{4, {0, 0, 0, 9}, {{0, 1}, {1, 2}, {0, 3}, {2, 3}}};
  const std::vector<int> ends{0, 2};
  EXPECT_DOUBLE_EQ(nstp_klein_ravi(free, ends).cost, 0.0);
  EXPECT_DOUBLE_EQ(nstp_exact(free, ends).cost, 0.0);

  const std::vector<int> single{1};
  EXPECT_DOUBLE_EQ(nstp_klein_ravi(g, single).cost, 0.0);
  NodeWeightedGraph weighted{2, {2, 5}, {{0, 1}}};
  const std::vector<int> both{0, 1};
  EXPECT_DOUBLE_EQ(nstp_exact(weighted, both).cost, 7.0);
  EXPECT_DOUBLE_EQ(nstp_klein_ravi(weighted, both).cost, 7.0);
}

TEST(NodeWeighted, SolversMatchBrute) {
  Rng rng(33);
  for (int t = 0; t < 80; ++t) {
    const int n = dt::uniform_int(rng, 3, 11);
    NodeWeightedGraph g{n, {}, {}};
    for (int v = 0; v < n; ++v) g.weight.push_back(dt::uniform_int(rng, 0, 6));
    for (int v = 1; v < n; ++v) g.edges.emplace_back(dt::uniform_int(rng, 0, v - 1), v);
    for (int e = 0; e < n / 2; ++e) {
      const int u = dt::uniform_int(rng, 0, n - 1), v = dt::uniform_int(rng, 0, n - 1);
      if (u != v) g.edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    const auto terms = random_terminals(rng, n, dt::uniform_int(rng, 2, std::min(n, 5)));
    const double brute = brute_nstp(g, mask_of(terms));
    ASSERT_EQ(nstp_exact(g, terms).cost, brute);
    ASSERT_EQ(nstp_dreyfus_wagner(g, terms).cost, brute);
    const auto kr = nstp_klein_ravi(g, terms);
    ASSERT_GE(kr.cost, brute);
    ASSERT_LE(kr.cost, (2 * std::log(static_cast<double>(terms.size())) + 1) * brute + 1e-9);
  }
}

TEST(HspReduce, Construction) {
  Hypergraph h(2);
  h.add_edge({0, 1}, 5.0);
  const HspReduction r = hsp_reduce(h);
  EXPECT_EQ(r.graph.n, 3);
  EXPECT_EQ(r.graph.weight, (std::vector<double>{0, 0, 5}));
  EXPECT_EQ(r.edge_node_of, (std::vector<int>{2}));
  EXPECT_EQ(r.graph.edges.size(), 2u);
  const std::vector<int> both{0, 1};
  EXPECT_DOUBLE_EQ(nstp_exact(r.graph, both).cost, 5.0);

  Hypergraph chain(4);
  chain.add_edge({0, 1, 2}, 1.0);
  chain.add_edge({2, 3}, 1.0);
  const std::vector<int> ends{0, 3};
  EXPECT_DOUBLE_EQ(nstp_exact(hsp_reduce(chain).graph, ends).cost, 2.0);

  Hypergraph all(4);
  all.add_edge({0, 1, 2, 3}, 4.5);
  const std::vector<int> terms{0, 2, 3};
  EXPECT_DOUBLE_EQ(nstp_exact(hsp_reduce(all).graph, terms).cost, 4.5);
}

TEST(Hsp, Examples) {
  Hypergraph chain(4);
  chain.add_edge({0, 1, 2}, 1.0);
  chain.add_edge({2, 3}, 1.0);
  const std::vector<int> ends{0, 3}, pair{0, 1}, single{2};
  auto s = hsp_solve(chain, ends, EvalMode::Exact);
  EXPECT_DOUBLE_EQ(s.cost, 2.0);
  EXPECT_EQ(s.edges, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(hsp_solve(chain, pair, EvalMode::Exact).cost, 1.0);
  s = hsp_solve(chain, single, EvalMode::Exact);
  EXPECT_DOUBLE_EQ(s.cost, 0.0);
  EXPECT_TRUE(s.edges.empty());
  Hypergraph split(4);
  split.add_edge({0, 1}, 1.0);
  EXPECT_THROW(hsp_solve(split, ends, EvalMode::Exact), Infeasible);
  EXPECT_THROW(hsp_solve(split, ends, EvalMode::Approximate), Infeasible);
}

TEST(Hsp, ReductionAndSolversAgree) {
  Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    const int n = dt::uniform_int(rng, 3, 8);
    const Hypergraph h = dt::random_hypergraph(rng, n, dt::uniform_int(rng, 1, 8), 4, true, false);
    const auto terms = random_terminals(rng, n, dt::uniform_int(rng, 2, std::min(n, 4)));
    const double brute = dt::brute_hsp(h, mask_of(terms));
    if (!std::isfinite(brute)) {
      ASSERT_THROW(hsp_solve(h, terms, EvalMode::Exact), Infeasible);
      continue;
    }
    const auto exact = hsp_solve(h, terms, EvalMode::Exact);
    ASSERT_EQ(exact.cost, brute);
    ASSERT_EQ(nstp_exact(hsp_reduce(h).graph, terms).cost, brute);
    ASSERT_TRUE(is_connected_subhypergraph(h, exact.edges, terms));
    const auto approx = hsp_solve(h, terms, EvalMode::Approximate);
    ASSERT_TRUE(approx.feasible);
    ASSERT_TRUE(is_connected_subhypergraph(h, approx.edges, terms));
    ASSERT_LE(approx.cost, (2 * std::log(static_cast<double>(terms.size())) + 1) * brute + 1e-9);
  }
}

TEST(MetricClosure, Examples) {
  Hypergraph h(3);
  h.add_edge({0, 1}, 1.0);
  h.add_edge({1, 2}, 2.0);
  EXPECT_DOUBLE_EQ(metric_closure(h)(0, 2), 3.0);

  Hypergraph one(3);
  one.add_edge({0, 1, 2}, 1.0);
  const Metric m = metric_closure(one);
  EXPECT_DOUBLE_EQ(m(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(m(1, 2), 1.0);

  Hypergraph iso(3);
  iso.add_edge({0, 1}, 1.0);
  const Metric d = metric_closure(iso);
  EXPECT_TRUE(d.has_infinite());
  EXPECT_TRUE(std::isinf(d(0, 2)));
  const Metric f = finite_completion(d);
  EXPECT_FALSE(f.has_infinite());
  EXPECT_EQ(triangle_violation(f.matrix()), 0.0);
}

TEST(MetricClosure, EqualsPairwiseHsp) {
  Rng rng(35);
  for (int t = 0; t < 30; ++t) {
    const int n = dt::uniform_int(rng, 3, 8);
    const Hypergraph h = dt::random_hypergraph(rng, n, 6, 4, false, true);
    const Metric m = metric_closure(h);
    EXPECT_LE(triangle_violation(m.matrix()), 1e-12);
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        const std::vector<int> pair{x, y};
        ASSERT_NEAR(m(x, y), hsp_solve(h, pair, EvalMode::Exact).cost, 1e-12);
      }
  }
}
