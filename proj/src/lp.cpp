#include "divcut/lp.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "divcut/errors.hpp"

namespace divcut {

int LpModel::add_variable(std::string name, double cost, double lower) {
  if (!std::isfinite(cost) || !std::isfinite(lower)) throw InvalidArgument("LP variable data must be finite");
  names_.push_back(std::move(name));
  costs_.push_back(cost);
  lower_.push_back(lower);
  return num_variables() - 1;
}

void LpModel::add_row(LpRow row) {
  if (!std::isfinite(row.rhs)) throw InvalidArgument("LP right-hand side must be finite");
  for (auto [j, a] : row.coeffs)
    if (j < 0 || j >= num_variables() || !std::isfinite(a))
      throw InvalidArgument("LP row refers to an unknown variable or has a non-finite coefficient");
  rows_.push_back(std::move(row));
}

double LpModel::row_activity(const LpRow& row, const Eigen::VectorXd& x) const {
  double total = 0.0;
  for (auto [j, a] : row.coeffs) total += a * x[j];
  return total;
}

double LpModel::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) worst = std::max(worst, lower_[static_cast<std::size_t>(j)] - x[j]);
  for (const auto& row : rows_) {
    const double a = row_activity(row, x);
    switch (row.relation) {
      case Relation::GreaterEqual: worst = std::max(worst, row.rhs - a); break;
      case Relation::LessEqual: worst = std::max(worst, a - row.rhs); break;
      case Relation::Equal: worst = std::max(worst, std::abs(a - row.rhs)); break;
    }
  }
  return worst;
}

void write_lp(const LpModel& model, std::ostream& out) {
  const auto& names = model.names();
  out << "\\ divcut LP\nMinimize\n obj:";
  for (int j = 0; j < model.num_variables(); ++j) out << ' ' << (model.costs()[static_cast<std::size_t>(j)] < 0 ? "- " : "+ ")
                                                      << std::abs(model.costs()[static_cast<std::size_t>(j)]) << ' ' << names[static_cast<std::size_t>(j)];
  out << "\nSubject To\n";
  int r = 0;
  for (const auto& row : model.rows()) {
    out << " r" << r++ << ':';
    for (auto [j, a] : row.coeffs) out << ' ' << (a < 0 ? "- " : "+ ") << std::abs(a) << ' ' << names[static_cast<std::size_t>(j)];
    out << (row.relation == Relation::GreaterEqual ? " >= " : row.relation == Relation::LessEqual ? " <= " : " = ")
        << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_variables(); ++j)
    out << ' ' << names[static_cast<std::size_t>(j)] << " >= " << model.lower()[static_cast<std::size_t>(j)] << '\n';
  out << "End\n";
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

/// Dense tableau: rows 0..m-1 are constraints, row m holds reduced costs; the
/// last column is the right-hand side (objective row: minus the objective).
class Tableau {
 public:
  Tableau(const LpModel& model, double tol) : tol_(tol) {
    const int n = model.num_variables();
    const int m = model.num_rows();
    n_struct_ = n;
    // count auxiliary columns
    int slack = 0, art = 0;
    std::vector<double> rhs(static_cast<std::size_t>(m));
    std::vector<Relation> rel(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const auto& row = model.rows()[static_cast<std::size_t>(i)];
      double b = row.rhs;
      for (auto [j, a] : row.coeffs) b -= a * model.lower()[static_cast<std::size_t>(j)];
      Relation r = row.relation;
      // rhs 0 rows are flipped to <= so they start with a slack instead of an artificial
      const bool flip = b < 0.0 || (b == 0.0 && r == Relation::GreaterEqual);
      flip_.push_back(flip);
      if (flip) {
        b = -b;
        if (r == Relation::GreaterEqual) r = Relation::LessEqual;
        else if (r == Relation::LessEqual) r = Relation::GreaterEqual;
      }
      rhs[static_cast<std::size_t>(i)] = b;
      rel[static_cast<std::size_t>(i)] = r;
      if (r != Relation::Equal) ++slack;
      if (r != Relation::LessEqual) ++art;
    }
    first_art_ = n + slack;
    cols_ = n + slack + art;
    t_.setZero(m + 1, cols_ + 1);
    basis_.assign(static_cast<std::size_t>(m), -1);
    int s = n, a = first_art_;
    for (int i = 0; i < m; ++i) {
      const auto& row = model.rows()[static_cast<std::size_t>(i)];
      const double sign = flip_[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
      for (auto [j, coef] : row.coeffs) t_(i, j) += sign * coef;
      t_(i, cols_) = rhs[static_cast<std::size_t>(i)];
      switch (rel[static_cast<std::size_t>(i)]) {
        case Relation::LessEqual:
          t_(i, s) = 1.0;
          basis_[static_cast<std::size_t>(i)] = s++;
          break;
        case Relation::GreaterEqual:
          t_(i, s++) = -1.0;
          t_(i, a) = 1.0;
          basis_[static_cast<std::size_t>(i)] = a++;
          break;
        case Relation::Equal:
          t_(i, a) = 1.0;
          basis_[static_cast<std::size_t>(i)] = a++;
          break;
      }
    }
  }

  int rows() const { return static_cast<int>(basis_.size()); }

  /// Loads reduced costs for the given column costs (artificial columns get `art_cost`).
  void set_objective(const std::vector<double>& costs, double art_cost) {
    const int m = rows();
    auto obj = t_.row(m);
    obj.setZero();
    for (int j = 0; j < cols_; ++j) obj[j] = cost_of(costs, art_cost, j);
    for (int i = 0; i < m; ++i) {
      const double cb = cost_of(costs, art_cost, basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) obj -= cb * t_.row(i);
    }
  }

  /// Runs Bland's rule. Returns Optimal, Unbounded or IterationLimit.
  LpStatus optimize(bool allow_artificial, long& pivots, long max_pivots) {
    const int m = rows();
    while (true) {
      int enter = -1;
      const int limit = allow_artificial ? cols_ : first_art_;
      for (int j = 0; j < limit; ++j)
        if (t_(m, j) < -tol_) {
          enter = j;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a <= tol_) continue;
        const double ratio = t_(i, cols_) / a;
        const double slack = 1e-12 * std::max(1.0, std::abs(best));
        if (leave < 0 || ratio < best - slack ||
            (ratio <= best + slack && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          if (leave < 0 || ratio < best - slack) best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      if (pivots >= max_pivots) return LpStatus::IterationLimit;
      pivot(leave, enter);
      ++pivots;
    }
  }

  /// Pivots basic artificial variables out wherever a non-artificial column allows it.
  void expel_artificials() {
    const int m = rows();
    for (int i = 0; i < m; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < first_art_) continue;
      for (int j = 0; j < first_art_; ++j)
        if (std::abs(t_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
    }
  }

  double objective_value() const { return -t_(rows(), cols_); }

  Eigen::VectorXd structural_values() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_struct_);
    for (int i = 0; i < rows(); ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      if (b < n_struct_) x[b] = t_(i, cols_);
    }
    return x;
  }

 private:
  double cost_of(const std::vector<double>& costs, double art_cost, int j) const {
    if (j >= first_art_) return art_cost;
    if (j < n_struct_) return costs[static_cast<std::size_t>(j)];
    return 0.0;
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  double tol_;
  int n_struct_ = 0;
  int first_art_ = 0;
  int cols_ = 0;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t_;
  std::vector<int> basis_;
  std::vector<bool> flip_;
};

}  // namespace

LpSolution simplex_solve(const LpModel& model, const SimplexOptions& options) {
  LpSolution sol;
  Tableau tab(model, options.tolerance);

  // phase 1: minimize the sum of artificials
  tab.set_objective(std::vector<double>(static_cast<std::size_t>(model.num_variables()), 0.0), 1.0);
  LpStatus st = tab.optimize(true, sol.pivots, options.max_pivots);
  if (st == LpStatus::IterationLimit) {
    sol.status = st;
    return sol;
  }
  double scale = 1.0;
  for (const auto& row : model.rows()) scale = std::max(scale, std::abs(row.rhs));
  if (tab.objective_value() > 1e-9 * scale) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  tab.expel_artificials();

  // phase 2
  tab.set_objective(model.costs(), 0.0);
  st = tab.optimize(false, sol.pivots, options.max_pivots);
  sol.status = st;
  if (st != LpStatus::Optimal) return sol;
  sol.values = tab.structural_values();
  for (int j = 0; j < model.num_variables(); ++j) sol.values[j] += model.lower()[static_cast<std::size_t>(j)];
  sol.objective = 0.0;
  for (int j = 0; j < model.num_variables(); ++j) sol.objective += model.costs()[static_cast<std::size_t>(j)] * sol.values[j];
  return sol;
}

CuttingPlaneResult cutting_plane(LpModel model, const Separator& separator, int max_rounds,
                                 const SimplexOptions& options) {
  CuttingPlaneResult result;
  while (result.rounds < max_rounds) {
    ++result.rounds;
    result.solution = simplex_solve(model, options);
    if (result.solution.status != LpStatus::Optimal) break;
    auto rows = separator(result.solution.values);
    if (rows.empty()) {
      result.converged = true;
      break;
    }
    for (auto& row : rows) model.add_row(std::move(row));
  }
  result.model = std::move(model);
  return result;
}

}  // namespace divcut
