#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace divcut {

enum class Relation { GreaterEqual, LessEqual, Equal };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  Relation relation = Relation::GreaterEqual;
  double rhs = 0.0;
};

/// Minimization LP over variables bounded below (default 0, no upper bounds).
class LpModel {
 public:
  int add_variable(std::string name, double cost, double lower = 0.0);
  void add_row(LpRow row);

  int num_variables() const { return static_cast<int>(names_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<LpRow>& rows() const { return rows_; }

  double row_activity(const LpRow& row, const Eigen::VectorXd& x) const;
  /// Largest absolute violation of any row or bound by x.
  double max_violation(const Eigen::VectorXd& x) const;

 private:
  std::vector<std::string> names_;
  std::vector<double> costs_;
  std::vector<double> lower_;
  std::vector<LpRow> rows_;
};

/// CPLEX-LP-like text dump, for debugging.
void write_lp(const LpModel& model, std::ostream& out);

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd values;
  double objective = 0.0;
  long pivots = 0;
};

struct SimplexOptions {
  long max_pivots = 1'000'000;
  double tolerance = 1e-9;
};

/// Dense two-phase primal simplex with Bland's rule.
LpSolution simplex_solve(const LpModel& model, const SimplexOptions& options = {});

using Separator = std::function<std::vector<LpRow>(const Eigen::VectorXd&)>;

struct CuttingPlaneResult {
  LpSolution solution;
  LpModel model;  // seed plus every row added
  int rounds = 0;
  bool converged = false;  // false: round limit hit, or the master stopped being optimal
};

/// Solve, ask the separator for violated rows, add them and repeat until the
/// separator returns nothing or `max_rounds` solves were made.
CuttingPlaneResult cutting_plane(LpModel model, const Separator& separator, int max_rounds,
                                 const SimplexOptions& options = {});

}  // namespace divcut
