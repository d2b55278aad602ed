#include "divcut/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divcut/errors.hpp"
#include "divcut/parallel.hpp"

namespace divcut {

Hypergraph::Hypergraph(int n) : n_(n) {
  if (n < 0) throw InvalidArgument("negative node count");
}

Hypergraph::Hypergraph(int n, std::vector<Hyperedge> edges) : Hypergraph(n) {
  edges_.reserve(edges.size());
  for (auto& e : edges) add_edge(std::move(e.members), e.weight);
}

void Hypergraph::add_edge(std::vector<int> members, double weight) {
  if (members.empty()) throw InvalidArgument("hyperedge with no members");
  if (!std::isfinite(weight) || weight < 0.0)
    throw InvalidArgument("hyperedge weight must be finite and nonnegative");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.front() < 0 || members.back() >= n_)
    throw InvalidArgument("hyperedge member outside 0.." + std::to_string(n_ - 1));
  edges_.push_back({std::move(members), weight});
}

int Hypergraph::rank() const {
  std::size_t r = 0;
  for (const auto& e : edges_) r = std::max(r, e.members.size());
  return static_cast<int>(r);
}

double Hypergraph::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.weight;
  return total;
}

Hypergraph Hypergraph::reweighted(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) throw InvalidArgument("reweighted: one weight per edge expected");
  Hypergraph out(n_);
  out.edges_ = edges_;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0)
      throw InvalidArgument("reweighted: weights must be finite and nonnegative");
    out.edges_[i].weight = weights[i];
  }
  return out;
}

void validate(const Instance& inst) {
  if (inst.supply.num_nodes() != inst.demand.num_nodes())
    throw InvalidArgument("supply and demand disagree on the node count");
  if (inst.supply.num_nodes() < 2) throw InvalidArgument("an instance needs at least 2 nodes");
  bool positive = false;
  bool splittable = false;
  for (const auto& e : inst.demand.edges()) {
    positive = positive || e.weight > 0.0;
    splittable = splittable || e.members.size() >= 2;
  }
  if (!positive || !splittable)
    throw InvalidArgument("demand needs a positive-weight edge and an edge with two or more nodes");
}

Instance make_instance(Hypergraph supply, Hypergraph demand) {
  Instance inst{std::move(supply), std::move(demand)};
  validate(inst);
  return inst;
}

Cut::Cut(NodeSet side) : side_(std::move(side)) {
  if (side_.empty() || side_.size() == side_.universe())
    throw InvalidArgument("a cut side must be nonempty and proper");
}

Cut Cut::canonical() const {
  if (side_.contains(0)) return *this;
  return Cut(side_.complement());
}

bool is_cut_by(std::span<const int> edge, const NodeSet& side) {
  bool in = false;
  bool out = false;
  for (int v : edge) {
    (side.contains(v) ? in : out) = true;
    if (in && out) return true;
  }
  return false;
}

double cut_weight(const Hypergraph& h, const Cut& cut) {
  if (cut.num_nodes() != h.num_nodes()) throw InvalidArgument("cut and hypergraph sizes differ");
  double total = 0.0;
  for (const auto& e : h.edges())
    if (is_cut_by(e.members, cut.side())) total += e.weight;
  return total;
}

SparsityReport sparsity(const Instance& inst, const Cut& cut) {
  SparsityReport r{cut};
  r.numerator = cut_weight(inst.supply, cut);
  r.denominator = cut_weight(inst.demand, cut);
  r.phi = r.denominator > 0.0 ? r.numerator / r.denominator : std::numeric_limits<double>::infinity();
  return r;
}

double expansion(const Hypergraph& h, const Cut& cut) {
  const int a = cut.side().size();
  return cut_weight(h, cut) / std::min(a, h.num_nodes() - a);
}

Hypergraph uniform_demand(int n) {
  if (n < 2) throw InvalidArgument("uniform demand needs n >= 2");
  Hypergraph h(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) h.add_edge({u, v}, 1.0);
  return h;
}

namespace {

struct MaskedEdge {
  std::uint64_t mask;
  double weight;
};

std::vector<MaskedEdge> masked(const Hypergraph& h) {
  std::vector<MaskedEdge> out;
  out.reserve(h.num_edges());
  for (const auto& e : h.edges()) {
    std::uint64_t m = 0;
    for (int v : e.members) m |= std::uint64_t{1} << v;
    out.push_back({m, e.weight});
  }
  return out;
}

double masked_cut(const std::vector<MaskedEdge>& edges, std::uint64_t side) {
  double total = 0.0;
  for (const auto& e : edges) {
    const std::uint64_t inside = e.mask & side;
    if (inside != 0 && inside != e.mask) total += e.weight;
  }
  return total;
}

struct Candidate {
  std::uint64_t side = 0;
  double num = 0.0;
  double den = 0.0;
  double phi = std::numeric_limits<double>::infinity();
  bool found = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!a.found) return false;
  if (!b.found) return true;
  if (a.phi != b.phi) return a.phi < b.phi;
  return lex_less_mask(a.side, b.side);
}

}  // namespace

SparsityReport brute_sparsest_cut(const Instance& inst, const BruteOptions& options) {
  validate(inst);
  const int n = inst.num_nodes();
  if (n > options.max_nodes || n > 63)
    throw CapExceeded("brute_sparsest_cut: n = " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(std::min(options.max_nodes, 63)));
  const auto supply = masked(inst.supply);
  const auto demand = masked(inst.demand);
  // side = 1 | (k << 1) for k in [0, 2^(n-1) - 1), which excludes the full set
  const std::uint64_t count = (std::uint64_t{1} << (n - 1)) - 1;
  const std::size_t chunks = std::min<std::uint64_t>(64, count);
  std::vector<Candidate> best(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t lo = count * c / chunks;
    const std::uint64_t hi = count * (c + 1) / chunks;
    Candidate local;
    for (std::uint64_t k = lo; k < hi; ++k) {
      const std::uint64_t side = 1 | (k << 1);
      const double den = masked_cut(demand, side);
      if (den <= 0.0) continue;
      const double num = masked_cut(supply, side);
      Candidate cand{side, num, den, num / den, true};
      if (better(cand, local)) local = cand;
    }
    best[c] = local;
  });
  Candidate overall;
  for (const auto& c : best)
    if (better(c, overall)) overall = c;
  if (!overall.found) throw Infeasible("no cut has a positive demand");
  SparsityReport r{Cut(NodeSet::from_mask(n, overall.side))};
  r.numerator = overall.num;
  r.denominator = overall.den;
  r.phi = overall.phi;
  return r;
}

}  // namespace divcut
