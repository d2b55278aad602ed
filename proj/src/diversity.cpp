#include "divcut/diversity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "divcut/errors.hpp"
#include "divcut/l1.hpp"
#include "divcut/random.hpp"
#include "divcut/steiner.hpp"

namespace divcut {

std::string to_string(DiversityKind kind) {
  switch (kind) {
    case DiversityKind::Diameter: return "diameter";
    case DiversityKind::KDiameter: return "k-diameter";
    case DiversityKind::Steiner: return "steiner";
    case DiversityKind::HypergraphSteiner: return "hypergraph-steiner";
    case DiversityKind::Tree: return "tree";
    case DiversityKind::L1: return "l1";
    case DiversityKind::Cut: return "cut";
    case DiversityKind::ExplicitTable: return "explicit-table";
    case DiversityKind::SubadditiveDerived: return "subadditive-derived";
  }
  return "unknown";
}

std::string to_string(EvalMode mode) { return mode == EvalMode::Exact ? "exact" : "approximate"; }

DiversityOracle::DiversityOracle(int n, DiversityKind kind, EvalMode mode, Fn fn, double factor_bound)
    : n_(n), kind_(kind), mode_(mode), factor_bound_(factor_bound), fn_(std::make_shared<const Fn>(std::move(fn))) {
  if (n < 0) throw InvalidArgument("negative ground set size");
}

double DiversityOracle::operator()(const NodeSet& a) const {
  if (a.universe() != n_) throw InvalidArgument("query set lives in a different universe");
  if (a.size() <= 1) return 0.0;
  return (*fn_)(a);
}

double DiversityOracle::operator()(std::initializer_list<int> members) const {
  return (*this)(NodeSet(n_, members));
}

Metric induced_metric(const DiversityOracle& div) {
  const int n = div.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) d(x, y) = d(y, x) = div({x, y});
  if (triangle_violation(d) > 1e-9)
    throw InvalidArgument("oracle '" + to_string(div.kind()) + "' breaks the pairwise triangle inequality");
  return Metric(std::move(d), MetricCheck::Basic);
}

DiversityOracle diameter_oracle(const Metric& m) {
  auto d = std::make_shared<const Eigen::MatrixXd>(m.matrix());
  return DiversityOracle(m.size(), DiversityKind::Diameter, EvalMode::Exact, [d](const NodeSet& a) {
    const auto members = a.members();
    return diameter(*d, members);
  });
}

DiversityOracle k_diameter_oracle(const DiversityOracle& div, int k, const KDiameterOptions& options) {
  if (k < 2) throw InvalidArgument("k-diameter needs k >= 2");
  const int cap = options.max_query_size;
  return DiversityOracle(
      div.size(), DiversityKind::KDiameter, div.mode(),
      [div, k, cap](const NodeSet& a) {
        const auto members = a.members();
        const int size = static_cast<int>(members.size());
        if (size > cap)
          throw CapExceeded("k-diameter query of size " + std::to_string(size) + " exceeds the cap " +
                            std::to_string(cap));
        double best = 0.0;
        // all subsets of size 2..k, by index combinations
        for (int s = 2; s <= std::min(k, size); ++s) {
          std::vector<int> idx(static_cast<std::size_t>(s));
          std::iota(idx.begin(), idx.end(), 0);
          while (true) {
            NodeSet b(div.size());
            for (int i : idx) b.insert(members[static_cast<std::size_t>(i)]);
            best = std::max(best, div(b));
            int i = s - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == size - s + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < s; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
          }
        }
        return best;
      },
      div.factor_bound());
}

DiversityOracle steiner_oracle(const Hypergraph& graph, EvalMode mode) {
  if (graph.rank() > 2) throw InvalidArgument("steiner_oracle expects a graph (rank <= 2)");
  auto g = std::make_shared<const Hypergraph>(graph);
  if (mode == EvalMode::Exact)
    return DiversityOracle(graph.num_nodes(), DiversityKind::Steiner, mode, [g](const NodeSet& a) {
      return steiner_tree_exact(*g, a.members()).cost;
    });
  return DiversityOracle(
      graph.num_nodes(), DiversityKind::Steiner, mode,
      [g](const NodeSet& a) { return steiner_tree_2approx(*g, a.members()).cost; }, 2.0);
}

DiversityOracle steiner_oracle(const Metric& m) {
  // shortest-path closure, so that inputs breaking the triangle inequality still give graph Steiner values
  Eigen::MatrixXd d = m.matrix();
  const auto n = d.rows();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  auto metric = std::make_shared<const Metric>(std::move(d), MetricCheck::Basic);
  return DiversityOracle(m.size(), DiversityKind::Steiner, EvalMode::Exact, [metric](const NodeSet& a) {
    return steiner_cost(*metric, a.members());
  });
}

DiversityOracle hypergraph_steiner_oracle(const Hypergraph& h, EvalMode mode) {
  auto hg = std::make_shared<const Hypergraph>(h);
  const double bound = mode == EvalMode::Exact ? 1.0 : 2.0 * std::log(std::max(2, h.num_nodes())) + 1.0;
  return DiversityOracle(
      h.num_nodes(), DiversityKind::HypergraphSteiner, mode,
      [hg, mode](const NodeSet& a) { return hsp_solve(*hg, a.members(), mode).cost; }, bound);
}

DiversityOracle l1_oracle(const Eigen::MatrixXd& points) {
  if (!points.allFinite()) throw InvalidArgument("l1_oracle: coordinates must be finite");
  auto p = std::make_shared<const Eigen::MatrixXd>(points);
  return DiversityOracle(static_cast<int>(points.rows()), DiversityKind::L1, EvalMode::Exact,
                         [p](const NodeSet& a) {
                           const auto members = a.members();
                           return l1_diversity(*p, members);
                         });
}

DiversityOracle cut_oracle(int n, const NodeSet& u) {
  if (u.universe() != n) throw InvalidArgument("cut_oracle: U lives in a different universe");
  if (u.empty()) throw InvalidArgument("cut_oracle: U must be nonempty");
  return DiversityOracle(n, DiversityKind::Cut, EvalMode::Exact, [u](const NodeSet& a) {
    return (a.intersects(u) && !a.is_subset_of(u)) ? 1.0 : 0.0;
  });
}

DiversityOracle from_subadditive(std::function<double(const NodeSet&)> f, int n) {
  return DiversityOracle(n, DiversityKind::SubadditiveDerived, EvalMode::Exact, std::move(f));
}

namespace {

int mis(const std::vector<std::uint64_t>& adj, std::uint64_t mask) {
  if (mask == 0) return 0;
  const int v = std::countr_zero(mask);
  const std::uint64_t rest = mask & (mask - 1);
  if ((adj[static_cast<std::size_t>(v)] & rest) == 0) return 1 + mis(adj, rest);
  return std::max(mis(adj, rest), 1 + mis(adj, rest & ~adj[static_cast<std::size_t>(v)]));
}

std::vector<std::uint64_t> adjacency_masks(const SimpleGraph& g) {
  if (g.n > 64) throw CapExceeded("independent sets need at most 64 nodes");
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.n), 0);
  for (auto [a, b] : g.edges) {
    if (a < 0 || b < 0 || a >= g.n || b >= g.n || a == b) throw InvalidArgument("bad simple graph edge");
    adj[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    adj[static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
  }
  return adj;
}

}  // namespace

int max_independent_set(const SimpleGraph& g, const NodeSet& a) {
  return mis(adjacency_masks(g), a.mask());
}

DiversityOracle independent_set_oracle(const SimpleGraph& g, const IndependentSetOptions& options) {
  if (g.n > options.max_nodes)
    throw CapExceeded("independent_set_oracle: n = " + std::to_string(g.n) + " exceeds the cap " +
                      std::to_string(options.max_nodes));
  auto adj = std::make_shared<const std::vector<std::uint64_t>>(adjacency_masks(g));
  return from_subadditive([adj](const NodeSet& a) { return static_cast<double>(mis(*adj, a.mask())); }, g.n);
}

DiversityOracle explicit_table_oracle(int n, std::map<std::uint64_t, double> values) {
  if (n > 64) throw CapExceeded("explicit tables need at most 64 nodes");
  auto table = std::make_shared<const std::map<std::uint64_t, double>>(std::move(values));
  return DiversityOracle(n, DiversityKind::ExplicitTable, EvalMode::Exact, [table](const NodeSet& a) {
    const std::uint64_t m = a.mask();
    if (auto it = table->find(m); it != table->end()) return it->second;
    double best = 0.0;
    for (const auto& [key, value] : *table)
      if ((key & ~m) == 0) best = std::max(best, value);
    return best;
  });
}

// ---------------------------------------------------------------------------

namespace {

class AxiomChecker {
 public:
  AxiomChecker(const DiversityOracle& div, const AxiomCheckOptions& options)
      : div_(div), opt_(options), n_(div.size()) {}

  AxiomReport run() {
    if (n_ > 64) throw InvalidArgument("check_axioms supports at most 64 nodes");
    report_.max_subset_size = std::clamp(opt_.max_subset_size, 0, n_);
    collect_small_sets();
    check_basic();
    check_monotone();
    check_triangle();
    if (opt_.check_sandwich && n_ >= 2) check_sandwich();
    check_k_diameter();
    report_.sets_checked = values_.size();
    return std::move(report_);
  }

 private:
  double value(std::uint64_t m) {
    if (auto it = values_.find(m); it != values_.end()) return it->second;
    const double v = div_(NodeSet::from_mask(n_, m));
    values_.emplace(m, v);
    return v;
  }

  // lhs <= rhs within tolerance relative to the largest operand
  bool holds(double lhs, double rhs, double scale) const {
    return lhs <= rhs + opt_.tolerance * std::max({std::abs(lhs), std::abs(rhs), scale});
  }

  void violate(std::string axiom, std::vector<std::uint64_t> sets, std::vector<double> vals) {
    if (report_.violations.size() >= 1000) return;
    AxiomViolation v{std::move(axiom), {}, std::move(vals)};
    for (auto s : sets) v.witnesses.push_back(NodeSet::from_mask(n_, s));
    report_.violations.push_back(std::move(v));
  }

  void collect_small_sets() {
    const int cap = report_.max_subset_size;
    small_.push_back(0);
    for (int size = 1; size <= cap; ++size) {
      // Gosper's hack over masks of popcount `size`
      std::uint64_t m = (size == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
      const std::uint64_t limit = n_ == 64 ? 0 : std::uint64_t{1} << n_;
      while (true) {
        small_.push_back(m);
        const std::uint64_t c = m & (~m + 1);
        const std::uint64_t r = m + c;
        if (r == 0) break;
        m = (((r ^ m) >> 2) / c) | r;
        if (limit != 0 && m >= limit) break;
      }
    }
  }

  void check_basic() {
    for (auto m : small_) {
      const double v = value(m);
      if (!(v >= 0.0) || !std::isfinite(v)) violate("nonnegativity", {m}, {v});
      if (std::popcount(m) <= 1 && v != 0.0) violate("zero on singletons", {m}, {v});
    }
  }

  void check_monotone() {
    for (auto m : small_) {
      if (std::popcount(m) >= report_.max_subset_size) continue;
      const double a = value(m);
      for (int v = 0; v < n_; ++v) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        if (m & bit) continue;
        const double b = value(m | bit);
        if (!holds(a, b, 0.0)) violate("monotonicity", {m, m | bit}, {a, b});
      }
    }
  }

  void triangle(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const double lhs = value(a | b);
    const double x = value(a | c);
    const double y = value(b | c);
    if (!holds(lhs, x + y, std::max(x, y))) violate("triangle", {a, b, c}, {lhs, x, y});
  }

  void check_triangle() {
    const std::size_t k = small_.size();
    const double work = 0.5 * static_cast<double>(k) * static_cast<double>(k) * n_;
    if (work <= 4e6) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j)
          for (int c = 0; c < n_; ++c) triangle(small_[i], small_[j], std::uint64_t{1} << c);
    } else {
      Rng rng(derive_seed(opt_.seed, 17));
      const auto pairs = static_cast<std::size_t>(4e6 / std::max(1, n_));
      for (std::size_t t = 0; t < pairs; ++t) {
        const auto a = small_[uniform_below(rng, k)];
        const auto b = small_[uniform_below(rng, k)];
        for (int c = 0; c < n_; ++c) triangle(a, b, std::uint64_t{1} << c);
      }
    }
    if (n_ == 0) return;
    Rng rng(derive_seed(opt_.seed, 29));
    const std::uint64_t universe = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    for (int t = 0; t < opt_.random_triples; ++t) {
      const std::uint64_t a = rng() & universe;
      const std::uint64_t b = rng() & universe;
      std::uint64_t c = rng() & universe;
      if (c == 0) c = std::uint64_t{1} << uniform_below(rng, static_cast<std::uint64_t>(n_));
      triangle(a, b, c);
    }
  }

  void check_sandwich() {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (int x = 0; x < n_; ++x)
      for (int y = x + 1; y < n_; ++y) d(x, y) = d(y, x) = value((std::uint64_t{1} << x) | (std::uint64_t{1} << y));
    const Metric metric(d, MetricCheck::Basic);
    const DiversityOracle diam = opt_.diameter ? *opt_.diameter : diameter_oracle(metric);
    const DiversityOracle steiner = opt_.steiner ? *opt_.steiner : steiner_oracle(metric);
    for (auto m : small_) {
      if (std::popcount(m) < 2) continue;
      const NodeSet a = NodeSet::from_mask(n_, m);
      const double v = value(m);
      const double lo = diam(a);
      const double hi = steiner(a);
      if (!holds(lo, v, 0.0)) violate("extremal lower (diameter)", {m}, {lo, v});
      if (!holds(v, hi, 0.0)) violate("extremal upper (steiner)", {m}, {v, hi});

      auto members = a.members();
      double chain = std::numeric_limits<double>::infinity();
      do {
        double len = 0.0;
        for (std::size_t i = 0; i + 1 < members.size(); ++i) len += d(members[i], members[i + 1]);
        chain = std::min(chain, len);
      } while (std::next_permutation(members.begin(), members.end()));
      if (!holds(v, chain, 0.0)) violate("chain bound", {m}, {v, chain});
      double star = std::numeric_limits<double>::infinity();
      for (int c : members) {
        double len = 0.0;
        for (int x : members) len += d(x, c);
        star = std::min(star, len);
      }
      if (!holds(v, star, 0.0)) violate("star bound", {m}, {v, star});
    }
  }

  void check_k_diameter() {
    for (int k : opt_.k_values) {
      const auto kd = k_diameter_oracle(div_, k);
      for (auto m : small_) {
        const int size = std::popcount(m);
        if (size < 2) continue;
        const double v = value(m);
        const double w = kd(NodeSet::from_mask(n_, m));
        if (!holds(w, v, 0.0)) violate("k-diameter minimality (k=" + std::to_string(k) + ")", {m}, {w, v});
        if (size <= k && !(holds(w, v, 0.0) && holds(v, w, 0.0)))
          violate("k-diameter agreement (k=" + std::to_string(k) + ")", {m}, {w, v});
      }
    }
  }

  const DiversityOracle& div_;
  const AxiomCheckOptions& opt_;
  int n_;
  AxiomReport report_;
  std::vector<std::uint64_t> small_;
  std::unordered_map<std::uint64_t, double> values_;
};

}  // namespace

AxiomReport check_axioms(const DiversityOracle& div, const AxiomCheckOptions& options) {
  return AxiomChecker(div, options).run();
}

}  // namespace divcut
