#include <gtest/gtest.h>

#include "divcut/errors.hpp"
#include "divcut/generate.hpp"
#include "divcut/pipeline.hpp"
#include "divcut/steiner.hpp"
#include "support.hpp"

using namespace divcut;
namespace dt = divcut::testing;

namespace {

Hypergraph pairs(int n, std::vector<std::pair<int, int>> edges, double w = 1.0) {
  Hypergraph g(n);
  for (auto [u, v] : edges) g.add_edge({u, v}, w);
  return g;
}

Instance k2() { return make_instance(pairs(2, {{0, 1}}), pairs(2, {{0, 1}})); }
Instance path3() { return make_instance(pairs(3, {{0, 1}, {1, 2}}), uniform_demand(3)); }
Instance triangle() { return make_instance(pairs(3, {{0, 1}, {1, 2}, {0, 2}}), uniform_demand(3)); }

Instance random_instance(Rng& rng, int n, int max_rank_g, int max_rank_h) {
  Hypergraph g = dt::random_hypergraph(rng, n, dt::uniform_int(rng, 2, 7), max_rank_g, true, true);
  Hypergraph h = dt::random_hypergraph(rng, n, dt::uniform_int(rng, 1, 5), max_rank_h, true, false);
  return make_instance(std::move(g), std::move(h));
}

double diversity_ratio(const Instance& inst, const DiversityOracle& div) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < inst.supply.num_edges(); ++i) num += inst.supply.edge(i).weight * div(inst.supply.edge_set(i));
  for (std::size_t i = 0; i < inst.demand.num_edges(); ++i) den += inst.demand.edge(i).weight * div(inst.demand.edge_set(i));
  return num / den;
}

}  // namespace

TEST(Seed, K2) {
  const LpModel m = build_relaxation_seed(k2());
  EXPECT_EQ(m.num_variables(), 2);
  ASSERT_EQ(m.num_rows(), 2);
  EXPECT_EQ(m.costs(), (std::vector<double>{1.0, 0.0}));
  const auto& norm = m.rows()[0];
  EXPECT_EQ(norm.relation, Relation::GreaterEqual);
  EXPECT_EQ(norm.rhs, 1.0);
  EXPECT_EQ(norm.coeffs, (std::vector<std::pair<int, double>>{{1, 1.0}}));
  const auto s = simplex_solve(m);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
  EXPECT_NEAR(s.values[0], 1.0, 1e-12);
}

TEST(Seed, Path3AndInfeasible) {
  const LpModel m = build_relaxation_seed(path3());
  EXPECT_EQ(m.num_variables(), 5);
  const Instance iso = make_instance(pairs(3, {{0, 1}}), pairs(3, {{0, 2}}));
  EXPECT_THROW(build_relaxation_seed(iso), Infeasible);
}

TEST(Separate, Examples) {
  const Instance p = path3();
  Eigen::VectorXd big(5);
  big << 100, 100, 1, 1, 1;
  EXPECT_TRUE(separate(p, big, EvalMode::Exact).empty());

  Eigen::VectorXd zero(5);
  zero << 0, 0, 1, 1, 1;
  const auto rows = separate(p, zero, EvalMode::Exact);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r.relation, Relation::GreaterEqual);

  Eigen::VectorXd half(5);
  half << 0.5, 0.5, 0.5, 1.0, 0.5;
  const auto some = separate(p, half, EvalMode::Exact);
  EXPECT_TRUE(some.empty());
}

TEST(Relaxation, SmallObjectives) {
  EXPECT_NEAR(solve_relaxation(k2(), EvalMode::Exact).relaxation.objective, 1.0, 1e-9);
  const auto p = solve_relaxation(path3(), EvalMode::Exact).relaxation;
  EXPECT_NEAR(p.objective, 0.5, 1e-9);
  EXPECT_LE(solve_relaxation(triangle(), EvalMode::Exact).relaxation.objective, 1.0 + 1e-9);
  EXPECT_NEAR(solve_relaxation_explicit(path3()).objective, 0.5, 1e-9);
}

TEST(Relaxation, LowerBoundAndExplicitAgreement) {
  Rng rng(71);
  for (int t = 0; t < 40; ++t) {
    const Instance inst = random_instance(rng, dt::uniform_int(rng, 3, 7), 3, 3);
    const auto out = solve_relaxation(inst, EvalMode::Exact);
    const auto& r = out.relaxation;
    const double phi = dt::brute_phi(inst).phi;
    ASSERT_LE(r.objective, phi + 1e-6) << t;
    double mass = 0.0, obj = 0.0;
    for (std::size_t i = 0; i < inst.demand.num_edges(); ++i) {
      ASSERT_GE(r.y[i], -1e-9);
      mass += inst.demand.edge(i).weight * r.y[i];
    }
    for (std::size_t i = 0; i < inst.supply.num_edges(); ++i) {
      ASSERT_GE(r.d[i], -1e-9);
      obj += inst.supply.edge(i).weight * r.d[i];
    }
    ASSERT_GE(mass, 1 - 1e-7);
    ASSERT_NEAR(obj, r.objective, 1e-7);
    if (inst.supply.num_edges() <= 12) {
      const auto ex = solve_relaxation_explicit(inst);
      ASSERT_EQ(ex.status, LpStatus::Optimal);
      ASSERT_NEAR(ex.objective, r.objective, 1e-6) << t;
    }
    const auto approx = solve_relaxation(inst, EvalMode::Approximate).relaxation;
    ASSERT_GE(approx.objective, r.objective - 1e-6);
  }
}

TEST(Relaxation, KDiameterClosureDoesNotIncreaseRatio) {
  Rng rng(72);
  for (int t = 0; t < 15; ++t) {
    const Instance inst = random_instance(rng, dt::uniform_int(rng, 3, 7), 4, 3);
    const auto out = solve_relaxation(inst, EvalMode::Exact);
    const int k = std::max(2, inst.demand.rank());
    const DiversityOracle kd = k_diameter_oracle(out.diversity.oracle, k);
    EXPECT_LE(diversity_ratio(inst, kd), out.relaxation.objective + 1e-6);
    EXPECT_LE(diversity_ratio(inst, kd), diversity_ratio(inst, out.diversity.oracle) + 1e-6);
  }
}

TEST(Relaxation, GraphSupplyDiversityIsSteiner) {
  Rng rng(73);
  for (int t = 0; t < 15; ++t) {
    const int n = dt::uniform_int(rng, 3, 7);
    const Instance inst = random_instance(rng, n, 2, 4);
    const auto out = solve_relaxation(inst, EvalMode::Exact);
    const DiversityOracle st = steiner_oracle(out.diversity.reweighted, EvalMode::Exact);
    for (std::size_t i = 0; i < inst.demand.num_edges(); ++i)
      ASSERT_NEAR(out.diversity.oracle(inst.demand.edge_set(i)), st(inst.demand.edge_set(i)), 1e-9);
  }
}

TEST(RoundCut, MediantExample) {
  Hypergraph g(3);
  g.add_edge({0, 1}, 1.0);
  g.add_edge({0, 2}, 1.0);
  g.add_edge({1, 2}, 0.0);
  const Instance inst = make_instance(g, pairs(3, {{0, 2}, {1, 2}}));
  Eigen::MatrixXd p(3, 1);
  p << 0, 1, 2;
  const auto r = round_cut(inst, identity_embedding(p));
  EXPECT_DOUBLE_EQ(r.best.phi, 0.5);
  EXPECT_EQ(r.best.cut.side(), NodeSet(3, {0, 1}));
  EXPECT_DOUBLE_EQ(r.aggregate_ratio, 1.0);
  EXPECT_EQ(r.candidates, 2u);
}

TEST(RoundCut, SingleCutAndCollapse) {
  Eigen::MatrixXd p(2, 1);
  p << 0, 3;
  const auto r = round_cut(k2(), identity_embedding(p));
  EXPECT_EQ(r.best.cut.side(), NodeSet(2, {0}));
  EXPECT_DOUBLE_EQ(r.best.phi, 1.0);
  EXPECT_THROW(round_cut(k2(), identity_embedding(Eigen::MatrixXd::Zero(2, 1))), Error);
}

TEST(RoundCut, MediantBoundOnRandomEmbeddings) {
  Rng rng(74);
  for (int t = 0; t < 100; ++t) {
    const int n = dt::uniform_int(rng, 3, 8);
    const Instance inst = random_instance(rng, n, 3, 3);
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) p(i, j) = dt::uniform_int(rng, 0, 3);
    RoundingResult r{SparsityReport{Cut(NodeSet(n, {0}))}};
    try {
      r = round_cut(inst, identity_embedding(p));
    } catch (const Error&) {
      continue;
    }
    if (std::isfinite(r.aggregate_ratio)) ASSERT_LE(r.best.phi, r.aggregate_ratio * (1 + 1e-12));
    ASSERT_GE(r.best.phi, dt::brute_phi(inst).phi - 1e-12);
    ASSERT_TRUE(r.best.cut.side().contains(0));
  }
}

TEST(Solve, Examples) {
  auto rep = solve_general(path3(), 1, {.brute = true});
  EXPECT_DOUBLE_EQ(rep.phi_rounded, 0.5);
  ASSERT_TRUE(rep.ratio.has_value());
  EXPECT_DOUBLE_EQ(*rep.ratio, 1.0);
  EXPECT_DOUBLE_EQ(solve_general(k2(), 1).phi_rounded, 1.0);
  EXPECT_DOUBLE_EQ(solve_supply_graph(path3(), 1).phi_rounded, 0.5);
  EXPECT_EQ(solve_supply_graph(path3(), 1).route, Route::SteinerFrt);

  Hypergraph star(4);
  for (int leaf = 1; leaf < 4; ++leaf) star.add_edge({0, leaf}, 1.0);
  Hypergraph leaves(4);
  leaves.add_edge({1, 2, 3}, 1.0);
  rep = solve_supply_graph(make_instance(star, leaves), 2, {.brute = true});
  EXPECT_GE(*rep.ratio, 1.0);

  const Instance split = make_instance(pairs(4, {{0, 1}, {2, 3}}), pairs(4, {{0, 2}}));
  EXPECT_THROW(solve_supply_graph(split, 1), Infeasible);
  Hypergraph tri(3);
  tri.add_edge({0, 1, 2}, 1.0);
  EXPECT_THROW(solve_supply_graph(make_instance(tri, uniform_demand(3)), 1), InvalidArgument);
}

TEST(Solve, RouteSelection) {
  Rng rng(75);
  const Instance wide = random_instance(rng, 6, 4, 2);
  if (wide.supply.rank() > wide.demand.rank())
    EXPECT_EQ(solve_general(wide, 1, {.trials = 2}).route, Route::KDiameterFrechet);
  const Instance narrow = random_instance(rng, 6, 2, 4);
  if (narrow.supply.rank() <= narrow.demand.rank())
    EXPECT_EQ(solve_general(narrow, 1, {.trials = 2}).route, Route::HypergraphSteinerFrt);
}

TEST(Solve, InvariantsOnRandomInstances) {
  Rng rng(76);
  for (int t = 0; t < 25; ++t) {
    const int n = dt::uniform_int(rng, 3, 8);
    const Instance inst = random_instance(rng, n, t % 2 ? 2 : 4, 3);
    const SolveReport rep = solve_general(inst, static_cast<std::uint64_t>(t), {.trials = 4, .brute = true});
    const double phi = dt::brute_phi(inst).phi;
    ASSERT_NEAR(*rep.phi_brute, phi, 1e-12);
    ASSERT_TRUE(std::isfinite(rep.phi_rounded));
    ASSERT_GE(rep.phi_rounded, phi - 1e-12);
    ASSERT_NEAR(sparsity(inst, rep.cut).phi, rep.phi_rounded, 1e-12);
    ASSERT_LE(rep.lp_objective, phi + 1e-6);
    if (std::isfinite(rep.aggregate_ratio)) ASSERT_LE(rep.phi_rounded, rep.aggregate_ratio * (1 + 1e-12));
  }
}

TEST(Solve, DeterministicForSeed) {
  Rng rng(77);
  const Instance inst = random_instance(rng, 8, 3, 3);
  const auto a = solve_general(inst, 9, {.trials = 6});
  const auto b = solve_general(inst, 9, {.trials = 6});
  EXPECT_EQ(a.cut, b.cut);
  EXPECT_EQ(a.phi_rounded, b.phi_rounded);
  EXPECT_EQ(a.lp_objective, b.lp_objective);
}

TEST(Report, Aggregation) {
  EXPECT_EQ(median({1.0}), 1.0);
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({1.0, 2.0, 3.0, 10.0}), 2.5);
  EXPECT_THROW(report({}), InvalidArgument);

  std::vector<SolveReport> rs;
  const double ratios[] = {1.0, 2.0, 3.0};
  const Route routes[] = {Route::HypergraphSteinerFrt, Route::KDiameterFrechet, Route::HypergraphSteinerFrt};
  for (int i = 0; i < 3; ++i) {
    SolveReport r(Cut(NodeSet(3, {0})));
    r.ratio = ratios[i];
    r.phi_brute = 1.0;
    r.lp_objective = 0.5;
    r.route = routes[i];
    r.num_nodes = 3 + i % 2;
    rs.push_back(r);
  }
  const BenchSummary s = report(rs);
  EXPECT_EQ(s.total, 3u);
  EXPECT_EQ(s.with_ratio, 3u);
  EXPECT_EQ(s.median_ratio, 2.0);
  EXPECT_EQ(s.max_ratio, 3.0);
  EXPECT_EQ(s.p90_ratio, 3.0);
  EXPECT_EQ(s.median_lp_gap, 2.0);
  std::size_t sum = 0;
  for (const auto& [name, stats] : s.routes) sum += stats.count;
  EXPECT_EQ(sum, 3u);
  EXPECT_EQ(s.ratio_quantiles_by_n.at(3), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(s.ratio_quantiles_by_n.at(4), (std::vector<double>{2.0, 2.0, 2.0}));
}

TEST(Names, RoundTrip) {
  for (Route r : {Route::Auto, Route::HypergraphSteinerFrt, Route::KDiameterFrechet, Route::SteinerFrt})
    EXPECT_EQ(parse_route(to_string(r)), r);
  for (SeparationMode m : {SeparationMode::Auto, SeparationMode::Exact, SeparationMode::Approximate})
    EXPECT_EQ(parse_separation_mode(to_string(m)), m);
  EXPECT_THROW(parse_route("nope"), InvalidArgument);
}
