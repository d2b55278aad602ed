#include <sstream>

#include <gtest/gtest.h>

#include "divcut/lp.hpp"
#include "support.hpp"

using namespace divcut;
namespace dt = divcut::testing;

TEST(Simplex, Examples) {
  LpModel one;
  const int x = one.add_variable("x", 1.0);
  one.add_row({{{x, 1.0}}, Relation::GreaterEqual, 1.0});
  auto s = simplex_solve(one);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
  EXPECT_NEAR(s.values[x], 1.0, 1e-12);

  LpModel two;
  const int a = two.add_variable("a", 1.0), b = two.add_variable("b", 1.0);
  two.add_row({{{a, 1.0}, {b, 1.0}}, Relation::GreaterEqual, 1.0});
  s = simplex_solve(two);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);

  LpModel unb;
  unb.add_variable("x", -1.0);
  EXPECT_EQ(simplex_solve(unb).status, LpStatus::Unbounded);
}

TEST(Simplex, InfeasibleAndBounds) {
  LpModel m;
  const int x = m.add_variable("x", 1.0);
  m.add_row({{{x, 1.0}}, Relation::GreaterEqual, 2.0});
  m.add_row({{{x, 1.0}}, Relation::LessEqual, 1.0});
  EXPECT_EQ(simplex_solve(m).status, LpStatus::Infeasible);

  LpModel lo;
  const int y = lo.add_variable("y", 2.0, 3.0);
  auto s = simplex_solve(lo);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.values[y], 3.0, 1e-12);
  EXPECT_NEAR(s.objective, 6.0, 1e-12);

  LpModel neg;
  const int z = neg.add_variable("z", 1.0, -5.0);
  neg.add_row({{{z, 1.0}}, Relation::GreaterEqual, -2.0});
  s = simplex_solve(neg);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, -2.0, 1e-12);
}

TEST(Simplex, EqualityRows) {
  LpModel m;
  const int a = m.add_variable("a", 1.0), b = m.add_variable("b", 3.0);
  m.add_row({{{a, 1.0}, {b, 1.0}}, Relation::Equal, 4.0});
  m.add_row({{{a, 1.0}}, Relation::LessEqual, 1.5});
  const auto s = simplex_solve(m);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 1.5 + 3 * 2.5, 1e-12);
  EXPECT_LE(m.max_violation(s.values), 1e-9);
}

TEST(Simplex, IterationLimit) {
  LpModel m;
  const int a = m.add_variable("a", 1.0), b = m.add_variable("b", 1.0);
  m.add_row({{{a, 1.0}, {b, 2.0}}, Relation::GreaterEqual, 1.0});
  m.add_row({{{a, 2.0}, {b, 1.0}}, Relation::GreaterEqual, 1.0});
  EXPECT_EQ(simplex_solve(m, {.max_pivots = 0}).status, LpStatus::IterationLimit);
}

TEST(Simplex, RandomModelsMatchBasisEnumeration) {
  Rng rng(61);
  int optimal = 0, infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    LpModel m;
    const int n = dt::uniform_int(rng, 1, 4), rows = dt::uniform_int(rng, 1, 5);
    for (int j = 0; j < n; ++j)
      m.add_variable("x" + std::to_string(j), dt::uniform_int(rng, -2, 4), t % 5 == 0 ? dt::uniform_int(rng, -2, 1) : 0.0);
    LpRow box{{}, Relation::LessEqual, 12.0};
    for (int j = 0; j < n; ++j) box.coeffs.emplace_back(j, 1.0);
    m.add_row(box);
    for (int r = 0; r < rows; ++r) {
      LpRow row;
      for (int j = 0; j < n; ++j)
        if (uniform01(rng) < 0.7) row.coeffs.emplace_back(j, dt::uniform_int(rng, -3, 3));
      const int rel = dt::uniform_int(rng, 0, 5);
      row.relation = rel < 3 ? Relation::GreaterEqual : rel < 5 ? Relation::LessEqual : Relation::Equal;
      row.rhs = dt::uniform_int(rng, -4, 6);
      m.add_row(row);
    }
    const double want = dt::brute_lp(m);
    const auto s = simplex_solve(m);
    if (!std::isfinite(want)) {
      ASSERT_EQ(s.status, LpStatus::Infeasible) << t;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(s.status, LpStatus::Optimal) << t;
    ASSERT_NEAR(s.objective, want, 1e-7 * std::max(1.0, std::abs(want))) << t;
    ASSERT_LE(m.max_violation(s.values), 1e-7) << t;
    ++optimal;
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 5);
}

TEST(Simplex, DegenerateCyclingExample) {
  // Beale's example; cycles under the textbook largest-coefficient rule.
  LpModel m;
  const int x1 = m.add_variable("x1", -0.75), x2 = m.add_variable("x2", 150.0);
  const int x3 = m.add_variable("x3", -0.02), x4 = m.add_variable("x4", 6.0);
  m.add_row({{{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}}, Relation::LessEqual, 0.0});
  m.add_row({{{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}}, Relation::LessEqual, 0.0});
  m.add_row({{{x3, 1.0}}, Relation::LessEqual, 1.0});
  const auto s = simplex_solve(m);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, -0.05, 1e-12);
}

TEST(CuttingPlane, EmptySeparatorStopsAfterOneSolve) {
  LpModel m;
  const int x = m.add_variable("x", 1.0);
  m.add_row({{{x, 1.0}}, Relation::GreaterEqual, 1.0});
  const auto r = cutting_plane(m, [](const Eigen::VectorXd&) { return std::vector<LpRow>{}; }, 10);
  EXPECT_EQ(r.rounds, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.solution.objective, 1.0, 1e-12);
}

TEST(CuttingPlane, LazyRowAdded) {
  LpModel m;
  const int x = m.add_variable("x", 1.0);
  m.add_row({{{x, 1.0}}, Relation::GreaterEqual, 1.0});
  const Separator sep = [x](const Eigen::VectorXd& v) {
    std::vector<LpRow> rows;
    if (v[x] < 2.0 - 1e-9) rows.push_back({{{x, 1.0}}, Relation::GreaterEqual, 2.0});
    return rows;
  };
  const auto r = cutting_plane(m, sep, 10);
  EXPECT_EQ(r.rounds, 2);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.solution.objective, 2.0, 1e-12);
  EXPECT_EQ(r.model.num_rows(), 2);

  const auto capped = cutting_plane(m, sep, 1);
  EXPECT_EQ(capped.rounds, 1);
  EXPECT_FALSE(capped.converged);
}

TEST(CuttingPlane, StopsOnInfeasibleMaster) {
  LpModel m;
  const int x = m.add_variable("x", 1.0);
  m.add_row({{{x, 1.0}}, Relation::LessEqual, 1.0});
  const auto r = cutting_plane(m, [x](const Eigen::VectorXd&) {
    return std::vector<LpRow>{{{{x, 1.0}}, Relation::GreaterEqual, 5.0}};
  }, 10);
  EXPECT_EQ(r.rounds, 2);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.solution.status, LpStatus::Infeasible);
}

TEST(WriteLp, Format) {
  LpModel m;
  const int a = m.add_variable("a", 1.0), b = m.add_variable("b", 2.5, 1.0);
  m.add_row({{{a, 1.0}, {b, -1.0}}, Relation::GreaterEqual, 0.0});
  m.add_row({{{a, 2.0}}, Relation::Equal, 3.0});
  std::ostringstream out;
  write_lp(m, out);
  EXPECT_EQ(out.str(),
            "\\ divcut LP\nMinimize\n obj: + 1 a + 2.5 b\nSubject To\n r0: + 1 a - 1 b >= 0\n r1: + 2 a = 3\n"
            "Bounds\n a >= 0\n b >= 1\nEnd\n");
}
