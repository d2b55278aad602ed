#include "divcut/embed.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "divcut/errors.hpp"
#include "divcut/l1.hpp"
#include "divcut/parallel.hpp"

namespace divcut {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> depths(const WeightedTree& t) {
  std::vector<int> depth(t.parent.size(), -1);
  for (std::size_t v = 0; v < t.parent.size(); ++v) {
    std::vector<int> chain;
    int u = static_cast<int>(v);
    while (u >= 0 && depth[static_cast<std::size_t>(u)] < 0) {
      chain.push_back(u);
      u = t.parent[static_cast<std::size_t>(u)];
    }
    int d = u < 0 ? -1 : depth[static_cast<std::size_t>(u)];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[static_cast<std::size_t>(*it)] = ++d;
  }
  return depth;
}

void require_finite(const Metric& m, const char* who) {
  if (m.has_infinite()) throw InvalidArgument(std::string(who) + ": metric has unreachable pairs");
}

}  // namespace

double WeightedTree::distance(int x, int y) const {
  const auto depth = depths(*this);
  int a = point_node[static_cast<std::size_t>(x)];
  int b = point_node[static_cast<std::size_t>(y)];
  double total = 0.0;
  while (a != b) {
    if (depth[static_cast<std::size_t>(a)] >= depth[static_cast<std::size_t>(b)]) {
      total += parent_weight[static_cast<std::size_t>(a)];
      a = parent[static_cast<std::size_t>(a)];
    } else {
      total += parent_weight[static_cast<std::size_t>(b)];
      b = parent[static_cast<std::size_t>(b)];
    }
  }
  return total;
}

double WeightedTree::diversity(const NodeSet& a) const {
  const auto members = a.members();
  if (members.size() < 2) return 0.0;
  const auto depth = depths(*this);
  std::vector<int> count(parent.size(), 0);
  for (int x : members) ++count[static_cast<std::size_t>(point_node[static_cast<std::size_t>(x)])];
  std::vector<int> order(parent.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int u, int v) {
    return depth[static_cast<std::size_t>(u)] > depth[static_cast<std::size_t>(v)];
  });
  const int total = static_cast<int>(members.size());
  double weight = 0.0;
  for (int v : order) {
    const int p = parent[static_cast<std::size_t>(v)];
    if (p < 0) continue;
    const int c = count[static_cast<std::size_t>(v)];
    // edge (v, p) lies in the spanning subtree iff it separates the set
    if (c > 0 && c < total) weight += parent_weight[static_cast<std::size_t>(v)];
    count[static_cast<std::size_t>(p)] += c;
  }
  return weight;
}

WeightedTree tree_from_graph(const Hypergraph& g) {
  const int n = g.num_nodes();
  if (n < 1) throw InvalidArgument("tree_from_graph: empty graph");
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  std::size_t pairs = 0;
  for (const auto& e : g.edges()) {
    if (e.members.size() != 2) throw InvalidArgument("tree_from_graph: expected pair edges");
    adj[static_cast<std::size_t>(e.members[0])].emplace_back(e.members[1], e.weight);
    adj[static_cast<std::size_t>(e.members[1])].emplace_back(e.members[0], e.weight);
    ++pairs;
  }
  if (pairs + 1 != static_cast<std::size_t>(n)) throw InvalidArgument("tree_from_graph: a tree has n-1 edges");
  WeightedTree t;
  t.parent.assign(static_cast<std::size_t>(n), -2);
  t.parent_weight.assign(static_cast<std::size_t>(n), 0.0);
  t.parent[0] = -1;
  std::vector<int> stack{0};
  int seen = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (auto [u, w] : adj[static_cast<std::size_t>(v)]) {
      if (t.parent[static_cast<std::size_t>(u)] != -2) continue;
      t.parent[static_cast<std::size_t>(u)] = v;
      t.parent_weight[static_cast<std::size_t>(u)] = w;
      stack.push_back(u);
      ++seen;
    }
  }
  if (seen != n) throw InvalidArgument("tree_from_graph: graph is not connected");
  t.point_node.resize(static_cast<std::size_t>(n));
  std::iota(t.point_node.begin(), t.point_node.end(), 0);
  return t;
}

DiversityOracle tree_oracle(const WeightedTree& t) {
  auto tree = std::make_shared<const WeightedTree>(t);
  return DiversityOracle(t.num_points(), DiversityKind::Tree, EvalMode::Exact,
                         [tree](const NodeSet& a) { return tree->diversity(a); });
}

std::string to_string(EmbeddingSource source) {
  switch (source) {
    case EmbeddingSource::FrtTree: return "frt-tree";
    case EmbeddingSource::Frechet: return "frechet";
    case EmbeddingSource::Naive: return "naive";
    case EmbeddingSource::Identity: return "identity";
  }
  return "unknown";
}

double Embedding::diversity(const NodeSet& a) const {
  const auto members = a.members();
  return l1_diversity(coords, members);
}

// ---------------------------------------------------------------------------

WeightedTree frt_embed(const Metric& m, Rng& rng) {
  require_finite(m, "frt_embed");
  const int n = m.size();
  if (n < 1) throw InvalidArgument("frt_embed: empty metric");
  const double scale = m.max_finite();

  // merge zero-distance points onto representatives
  std::vector<int> rep(static_cast<std::size_t>(n), -1);
  std::vector<int> reps;
  for (int x = 0; x < n; ++x) {
    if (rep[static_cast<std::size_t>(x)] >= 0) continue;
    rep[static_cast<std::size_t>(x)] = x;
    reps.push_back(x);
    for (int y = x + 1; y < n; ++y)
      if (rep[static_cast<std::size_t>(y)] < 0 && m(x, y) <= 1e-12 * scale) rep[static_cast<std::size_t>(y)] = x;
  }

  WeightedTree t;
  t.parent.push_back(-1);
  t.parent_weight.push_back(0.0);
  t.point_node.assign(static_cast<std::size_t>(n), 0);
  if (reps.size() == 1) return t;

  double dmin = kInf, diam = 0.0;
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      const double d = m(reps[i], reps[j]);
      if (d > 0.0) dmin = std::min(dmin, d);
      diam = std::max(diam, d);
    }

  const double beta = 1.0 + uniform01(rng);
  std::vector<int> perm = reps;
  shuffle(perm.begin(), perm.end(), rng);

  auto cluster_diameter = [&](const std::vector<int>& c) {
    double best = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) best = std::max(best, m(c[i], c[j]));
    return best;
  };

  struct Cluster {
    std::vector<int> members;
    int node;
    double diam;
  };
  int top = 1;
  while (std::ldexp(dmin, top - 1) < diam) ++top;
  std::vector<Cluster> level{{reps, 0, diam}};
  for (int i = top - 1; i >= 0; --i) {
    const double radius = beta * std::ldexp(dmin, i - 1);
    std::vector<Cluster> next;
    for (auto& c : level) {
      if (c.members.size() == 1) {
        next.push_back(std::move(c));
        continue;
      }
      std::vector<char> assigned(c.members.size(), 0);
      std::vector<std::vector<int>> groups;
      std::size_t left = c.members.size();
      for (int center : perm) {
        if (left == 0) break;
        std::vector<int> group;
        for (std::size_t k = 0; k < c.members.size(); ++k)
          if (!assigned[k] && m(center, c.members[k]) <= radius) {
            assigned[k] = 1;
            group.push_back(c.members[k]);
          }
        left -= group.size();
        if (!group.empty()) groups.push_back(std::move(group));
      }
      if (groups.size() == 1) {
        next.push_back(std::move(c));
        continue;
      }
      for (auto& g : groups) {
        const double gd = cluster_diameter(g);
        const int node = t.num_tree_nodes();
        t.parent.push_back(c.node);
        t.parent_weight.push_back(c.diam - gd);
        next.push_back({std::move(g), node, gd});
      }
    }
    level = std::move(next);
  }
  for (const auto& c : level) {
    if (c.members.size() != 1) throw Error("frt_embed: decomposition did not reach singletons");
    t.point_node[static_cast<std::size_t>(c.members.front())] = c.node;
  }
  for (int x = 0; x < n; ++x)
    t.point_node[static_cast<std::size_t>(x)] = t.point_node[static_cast<std::size_t>(rep[static_cast<std::size_t>(x)])];
  return t;
}

Embedding tree_to_l1(const WeightedTree& t) {
  const int n = t.num_points();
  const int edges = std::max(1, t.num_tree_nodes() - 1);
  Embedding e{Eigen::MatrixXd::Zero(n, edges), EmbeddingSource::FrtTree};
  for (int x = 0; x < n; ++x)
    for (int v = t.point_node[static_cast<std::size_t>(x)]; v > 0; v = t.parent[static_cast<std::size_t>(v)]) {
      if (v < 0) break;
      e.coords(x, v - 1) = t.parent_weight[static_cast<std::size_t>(v)];
    }
  return e;
}

namespace {

std::vector<NodeSet> scoring_family(int n, const SteinerEmbedOptions& options, Rng& rng) {
  std::vector<NodeSet> sets;
  const int small = std::min(options.exhaustive_size, n);
  std::function<void(int, NodeSet&, int)> rec = [&](int start, NodeSet& cur, int size) {
    if (size >= 2) sets.push_back(cur);
    if (size == small || sets.size() > 20000) return;
    for (int v = start; v < n; ++v) {
      cur.insert(v);
      rec(v + 1, cur, size + 1);
      cur.erase(v);
    }
  };
  NodeSet cur(n);
  rec(0, cur, 0);
  const int big = std::min(options.max_sample_size, n);
  if (big > small) {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    for (int s = 0; s < options.sampled_sets; ++s) {
      const int size = small + 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(big - small)));
      shuffle(all.begin(), all.end(), rng);
      sets.emplace_back(n, std::span<const int>(all.data(), static_cast<std::size_t>(size)));
    }
  }
  return sets;
}

}  // namespace

Embedding steiner_to_l1(const Metric& m, Rng& rng, const SteinerEmbedOptions& options) {
  const std::uint64_t base = rng();
  if (options.trials <= 1) {
    Rng trial = make_rng(base, 0);
    return tree_to_l1(frt_embed(m, trial));
  }
  Rng family_rng = make_rng(base, ~std::uint64_t{0});
  const auto family = scoring_family(m.size(), options, family_rng);
  const auto steiner = steiner_oracle(m);
  // memoize the Steiner values once for all trials
  std::vector<double> values(family.size());
  parallel_for(family.size(), [&](std::size_t i) { values[i] = steiner(family[i]); });
  std::vector<Embedding> embeddings(static_cast<std::size_t>(options.trials));
  std::vector<double> score(static_cast<std::size_t>(options.trials), kInf);
  parallel_for(embeddings.size(), [&](std::size_t t) {
    Rng trial = make_rng(base, t);
    embeddings[t] = tree_to_l1(frt_embed(m, trial));
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double x = values[i];
      const double y = embeddings[t].diversity(family[i]);
      if (x > 0.0) c2 = std::max(c2, y / x);
      if (y > 0.0) c1 = std::max(c1, x / y);
      else if (x > 0.0) c1 = kInf;
    }
    score[t] = std::max(c1, 1.0) * std::max(c2, 1.0);
  });
  const auto best = static_cast<std::size_t>(std::min_element(score.begin(), score.end()) - score.begin());
  return std::move(embeddings[best]);
}

Embedding frechet_embed(const Metric& m, Rng& rng, int reps_per_scale) {
  require_finite(m, "frechet_embed");
  const int n = m.size();
  if (n < 1) throw InvalidArgument("frechet_embed: empty metric");
  if (n == 1) return Embedding{Eigen::MatrixXd::Zero(1, 1), EmbeddingSource::Frechet};
  const double log_n = std::log2(static_cast<double>(n));
  const int scales = static_cast<int>(std::floor(log_n));
  const int reps = reps_per_scale > 0 ? reps_per_scale : static_cast<int>(std::ceil(4.0 * log_n));

  std::vector<Eigen::VectorXd> columns;
  for (int t = 1; t <= scales; ++t) {
    const double p = std::ldexp(1.0, -t);
    for (int r = 0; r < reps; ++r) {
      std::vector<int> sample;
      for (int attempt = 0; attempt < 32 && sample.empty(); ++attempt)
        for (int x = 0; x < n; ++x)
          if (uniform01(rng) < p) sample.push_back(x);
      if (sample.empty()) continue;
      Eigen::VectorXd col(n);
      for (int x = 0; x < n; ++x) {
        double best = kInf;
        for (int a : sample) best = std::min(best, m(x, a));
        col[x] = best;
      }
      columns.push_back(std::move(col));
    }
  }
  if (columns.empty()) return Embedding{Eigen::MatrixXd::Zero(n, 1), EmbeddingSource::Frechet};
  const auto dims = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd coords(n, dims);
  for (Eigen::Index i = 0; i < dims; ++i) coords.col(i) = columns[static_cast<std::size_t>(i)];
  coords /= static_cast<double>(dims);
  return Embedding{std::move(coords), EmbeddingSource::Frechet};
}

Embedding diam_to_l1(const Metric& m, Rng& rng, int reps_per_scale) {
  return frechet_embed(m, rng, reps_per_scale);
}

Embedding naive_embed(const Metric& m) {
  require_finite(m, "naive_embed");
  if (m.size() == 0) throw InvalidArgument("naive_embed: empty metric");
  return Embedding{m.matrix(), EmbeddingSource::Naive};
}

Embedding identity_embedding(const Eigen::MatrixXd& points) {
  if (!points.allFinite()) throw InvalidArgument("identity_embedding: coordinates must be finite");
  if (points.cols() == 0) return Embedding{Eigen::MatrixXd::Zero(points.rows(), 1), EmbeddingSource::Identity};
  return Embedding{points, EmbeddingSource::Identity};
}

KDiameterRoute kdiam_route(const DiversityOracle& kdiam, int k, int check_size) {
  if (k < 2) throw InvalidArgument("kdiam_route: k must be at least 2");
  const int n = kdiam.size();
  if (n > 64) throw InvalidArgument("kdiam_route: at most 64 nodes");
  Metric metric = induced_metric(kdiam);
  KDiameterRoute route{metric, diameter_oracle(metric), k};
  const int cap = std::min(check_size, n);
  std::function<void(int, NodeSet&, int)> rec = [&](int start, NodeSet& cur, int size) {
    if (size >= 2) {
      const double lo = route.diameter(cur);
      const double mid = kdiam(cur);
      if (mid > 0.0) route.worst_lower = std::max(route.worst_lower, lo / mid);
      else if (lo > 0.0) route.worst_lower = kInf;
      if (lo > 0.0) route.worst_upper = std::max(route.worst_upper, mid / (k * lo));
      else if (mid > 0.0) route.worst_upper = kInf;
    }
    if (size == cap) return;
    for (int v = start; v < n; ++v) {
      cur.insert(v);
      rec(v + 1, cur, size + 1);
      cur.erase(v);
    }
  };
  NodeSet cur(n);
  rec(0, cur, 0);
  route.certified = route.worst_lower <= 1.0 + 1e-9 && route.worst_upper <= 1.0 + 1e-9;
  return route;
}

double CutDecomposition::evaluate(const NodeSet& a) const {
  double total = 0.0;
  for (const auto& c : cuts)
    if (a.intersects(c.side) && !a.is_subset_of(c.side)) total += c.alpha;
  return total;
}

CutDecomposition l1_to_cuts(const Embedding& e) {
  CutDecomposition out;
  const int n = e.size();
  for (int j = 0; j < e.dimension(); ++j) {
    std::vector<double> values(e.coords.col(j).data(), e.coords.col(j).data() + n);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      NodeSet side(n);
      for (int x = 0; x < n; ++x)
        if (e.coords(x, j) <= values[k]) side.insert(x);
      out.cuts.push_back({std::move(side), values[k + 1] - values[k]});
    }
  }
  return out;
}

DistortionPolicy DistortionPolicy::exhaustive(int max_size) {
  DistortionPolicy p;
  p.kind = Kind::Exhaustive;
  p.max_size = max_size;
  return p;
}

DistortionPolicy DistortionPolicy::sampled(int samples, int max_size, std::uint64_t seed) {
  DistortionPolicy p;
  p.kind = Kind::Sampled;
  p.samples = samples;
  p.max_size = max_size;
  p.seed = seed;
  return p;
}

DistortionPolicy DistortionPolicy::explicit_sets(std::vector<NodeSet> sets) {
  DistortionPolicy p;
  p.kind = Kind::Explicit;
  p.sets = std::move(sets);
  return p;
}

namespace {

struct DistortionAccumulator {
  DistortionReport report;
  bool any = false;

  void add(const NodeSet& a, double x, double y) {
    ++report.sets_checked;
    if (x <= 0.0 && y <= 0.0) return;
    const double r1 = y > 0.0 ? x / y : kInf;
    const double r2 = x > 0.0 ? y / x : kInf;
    if (!any || r1 > report.c1) {
      report.c1 = r1;
      report.c1_witness = a;
    }
    if (!any || r2 > report.c2) {
      report.c2 = r2;
      report.c2_witness = a;
    }
    any = true;
  }
};

}  // namespace

DistortionReport measure_distortion(const DiversityOracle& div, const Embedding& e, const DistortionPolicy& policy) {
  if (div.size() != e.size()) throw InvalidArgument("measure_distortion: oracle and embedding sizes differ");
  const int n = e.size();
  DistortionAccumulator acc;
  acc.report.c1 = 0.0;
  acc.report.c2 = 0.0;
  switch (policy.kind) {
    case DistortionPolicy::Kind::Exhaustive: {
      acc.report.policy = "exhaustive<=" + std::to_string(policy.max_size);
      const int cap = std::min(policy.max_size, n);
      const auto dims = e.coords.cols();
      std::vector<Eigen::RowVectorXd> lo(static_cast<std::size_t>(cap) + 1), hi(static_cast<std::size_t>(cap) + 1);
      NodeSet cur(n);
      std::function<void(int, int)> rec = [&](int start, int size) {
        for (int v = start; v < n; ++v) {
          const auto s = static_cast<std::size_t>(size);
          if (size == 0) {
            lo[1] = e.coords.row(v);
            hi[1] = lo[1];
          } else {
            lo[s + 1] = lo[s].cwiseMin(e.coords.row(v));
            hi[s + 1] = hi[s].cwiseMax(e.coords.row(v));
          }
          cur.insert(v);
          if (size + 1 >= 2) acc.add(cur, div(cur), dims == 0 ? 0.0 : (hi[s + 1] - lo[s + 1]).sum());
          if (size + 1 < cap) rec(v + 1, size + 1);
          cur.erase(v);
        }
      };
      if (cap >= 2) rec(0, 0);
      break;
    }
    case DistortionPolicy::Kind::Sampled: {
      acc.report.policy = "sampled:" + std::to_string(policy.samples);
      Rng rng(policy.seed);
      std::vector<int> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      const int cap = std::min(policy.max_size, n);
      if (cap < 2) break;
      for (int s = 0; s < policy.samples; ++s) {
        const int size = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cap - 1)));
        shuffle(all.begin(), all.end(), rng);
        const NodeSet a(n, std::span<const int>(all.data(), static_cast<std::size_t>(size)));
        acc.add(a, div(a), e.diversity(a));
      }
      break;
    }
    case DistortionPolicy::Kind::Explicit:
      acc.report.policy = "explicit:" + std::to_string(policy.sets.size());
      for (const auto& a : policy.sets)
        if (a.size() >= 2) acc.add(a, div(a), e.diversity(a));
      break;
  }
  if (!acc.any) {
    acc.report.c1 = 1.0;
    acc.report.c2 = 1.0;
  }
  acc.report.c = acc.report.c1 * acc.report.c2;
  return acc.report;
}

}  // namespace divcut
