#pragma once

#include <cstdint>
#include <string>

#include "divcut/hypergraph.hpp"

namespace divcut {

enum class GeneratorKind {
  RandomHypergraph,    // random supply and demand hypergraphs
  Path,                // unit path supply, uniform demand
  Grid,                // unit rows x cols grid supply, uniform demand
  Expander,            // random d-regular supply graph, uniform demand
  GraphHypergraph,     // random supply graph, random demand hypergraph
  HypergraphUniform,   // random supply hypergraph, uniform demand
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::RandomHypergraph;
  int n = 8;
  int m = 10;          // edges per random hypergraph
  int max_rank = 3;
  int degree = 3;      // expander
  int rows = 2;        // grid
  int cols = 3;        // grid
  double weight_lo = 1.0;
  double weight_hi = 1.0;
  bool integer_weights = false;  // draw integers in [weight_lo, weight_hi]
};

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

/// Deterministic for a fixed (spec, seed). Random supplies are patched to be
/// connected so every demand edge can be served. Throws InvalidArgument on
/// infeasible parameters.
Instance generate(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace divcut
