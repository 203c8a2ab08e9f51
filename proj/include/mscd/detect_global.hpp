#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mscd/criteria_global.hpp"
#include "mscd/criterion.hpp"
#include "mscd/graph.hpp"
#include "mscd/stability_walk.hpp"

namespace mscd {

struct GlobalDetectOptions {
  /// Limit on node-move/merge phase alternations (and on passes within a phase).
  std::size_t pass_cap = 1000;
  /// Recompute Q and check connectivity at every phase boundary; throws ContractViolation on mismatch.
  bool audit = false;
};

struct OptimizeStats {
  std::size_t node_moves = 0;
  std::size_t merges = 0;
  std::size_t node_passes = 0;
  std::size_t merge_passes = 0;
  std::size_t alternations = 0;
  std::size_t connectivity_checks = 0;
  std::size_t rejected_by_connectivity = 0;
};

struct GlobalScaleResult {
  double param = 0.0;
  Partition partition;
  double quality = 0.0;
  OptimizeStats stats;
};

/// Greedy two-phase optimisation of one criterion at one scale.
///
/// Phase one visits nodes in a shuffled order and moves each into the
/// neighbouring community with the largest positive gain, provided the
/// community it leaves stays connected; passes repeat until nothing moves.
/// Phase two visits communities in a shuffled order and merges each with the
/// neighbouring community of largest positive gain, again until nothing
/// changes. Both phases alternate until a merge phase makes no change.
///
/// Neighbourhood and connectivity always refer to model.graph(); gains use
/// model.weights(), which differs only for stability.
GlobalScaleResult optimize_at_scale(const QualityModel& model, const Partition& initial, std::uint64_t seed,
                                    const GlobalDetectOptions& options = {});

GlobalScaleResult optimize_at_scale(const Graph& g, const GlobalCriterion& crit, const Partition& initial,
                                    std::uint64_t seed, const GlobalDetectOptions& options = {});

/// Runs optimize_at_scale over params (fine to coarse), starting from
/// singletons and warm-starting every later scale from the previous result.
/// tau is the walk threshold for SO at t > 1 and is ignored otherwise.
std::vector<GlobalScaleResult> detect_global(const Graph& g, Criterion kind, std::span<const double> params,
                                             double tau, std::uint64_t seed, const GlobalDetectOptions& options = {});

/// Seed used for scale number `index` of a run seeded with `seed`.
std::uint64_t scale_seed(std::uint64_t seed, std::size_t index) noexcept;

}  // namespace mscd
