#pragma once

#include <cstddef>
#include <cstdint>

#include "mscd/graph.hpp"

namespace mscd {

/// Planted two-level benchmark: micro communities nested inside macro communities.
struct BenchSpec {
  std::size_t n = 1000;
  std::size_t micro_min = 20;
  std::size_t micro_max = 40;
  std::size_t macro_min = 100;
  std::size_t macro_max = 250;
  double mean_degree = 10.0;
  std::size_t max_degree = 15;
  double mu1 = 0.1;  ///< fraction of edges leaving the macro community
  double mu2 = 0.2;  ///< fraction of edges leaving the micro community (mu2 >= mu1)
  std::uint64_t seed = 1;
  std::size_t rewiring_sweeps = 100;
};

struct Benchmark {
  Graph graph;  ///< nodes labelled "0" .. "n-1", simple and unweighted
  Partition micro;
  Partition macro;
};

/// Throws ArgumentError when the BenchSpec breaks its own invariants and
/// GenerationError when it cannot be realised.
///
/// Block sizes are drawn uniformly within their ranges, never leaving a
/// remainder smaller than the minimum. Node degrees are uniform integers in
/// [d/2, 3d/2], clamped to [1, max_degree]. Every stub independently lands in
/// the micro block (1 - mu2), elsewhere in the macro block (mu2 - mu1) or
/// outside the macro block (mu1); stubs are then paired at random within each
/// group and bad pairs (self-loops, repeats, wrong block) are rewired by
/// random swaps. An unpaired stub left in a group is dropped.
Benchmark generate_two_level(const BenchSpec& spec);

}  // namespace mscd
