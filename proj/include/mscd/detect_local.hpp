#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mscd/criteria_local.hpp"
#include "mscd/criterion.hpp"
#include "mscd/graph.hpp"

namespace mscd {

inline constexpr std::size_t kUnboundedPasses = std::numeric_limits<std::size_t>::max();

struct GrowthStats {
  std::size_t added = 0;
  std::size_t removed = 0;
  std::size_t cleanup_passes = 0;
};

struct GrowResult {
  std::vector<NodeId> members;  ///< sorted
  bool changed = false;
  GrowthStats stats;
};

/// Grows communities with a max-priority frontier, then prunes members.
///
/// Frontier nodes are ranked by 2 d_in / (d_in + d_out)^alpha for LFK and by
/// their similarity into the community for HLSLW. A popped node joins when its
/// gain is positive, and its outside neighbours are re-ranked. Stale entries
/// are skipped on pop. If anything joined, up to k_max cleanup passes remove
/// members whose removal improves the criterion; a community never shrinks
/// below one node.
///
/// Scratch arrays are sized to the graph once and reused between calls, so a
/// grower is cheap to call repeatedly but must not be shared across threads.
class CommunityGrower {
 public:
  /// For HLSLW pass the similarity graph.
  CommunityGrower(const Graph& g, Criterion kind);

  /// may_join filters candidates (no-overlap mode); empty accepts everyone.
  GrowResult grow(std::span<const NodeId> members, double alpha, std::size_t k_max = kUnboundedPasses,
                  const std::function<bool(NodeId)>& may_join = {});

  /// Criterion value of one community: LFK fitness, or tightness (0 when undefined).
  double community_value(std::span<const NodeId> members, double alpha) const;

 private:
  struct Entry {
    double key;
    NodeId node;
    std::uint32_t version;
  };
  struct EntryOrder {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.key < b.key || (a.key == b.key && a.node > b.node);
    }
  };

  const Graph& graph_;
  Criterion kind_;
  std::vector<char> member_;
  std::vector<double> to_community_;
  std::vector<char> touched_flag_;
  std::vector<NodeId> touched_;
  std::vector<std::uint32_t> version_;
  std::vector<NodeId> members_;
  LocalLedger ledger_;

  void add(NodeId v);
  void remove(NodeId v);
  void touch(NodeId v);
  NodeContribution node_terms(NodeId v) const;
  double frontier_key(NodeId v, double alpha) const;
  bool improves_by_joining(NodeId v, double alpha) const;
  bool improves_by_leaving(NodeId v, double alpha) const;
  void reset();
};

GrowResult grow_community(const Graph& g, std::span<const NodeId> community, Criterion kind, double alpha,
                          std::size_t k_max = kUnboundedPasses);

/// True iff every node of c2 is in c1. Both lists sorted.
bool encompasses(std::span<const NodeId> c1, std::span<const NodeId> c2);

/// Repeatedly merges pairs with |C1 & C2| / |C2| >= eta or |C1 & C2| / |C1| >= eta.
/// With `weighted`, sizes are replaced by internal edge weight (ordered pairs) in g;
/// a pair whose weights vanish falls back to cardinalities.
Cover merge_overlapping(const Cover& cover, double eta, bool weighted, const Graph& g);

struct LocalDetectOptions {
  double eta = 0.5;
  bool weighted_merge = false;
  Neighbourhood neighbourhood = Neighbourhood::Open;
  bool allow_overlap = true;
  std::size_t max_cleanup_passes = kUnboundedPasses;
};

struct LocalScaleResult {
  double param = 0.0;
  Cover cover;
  double quality = 0.0;  ///< mean criterion value over communities
  std::size_t regrown = 0;
  std::size_t changed = 0;
  std::size_t dropped_encompassed = 0;
  std::size_t merges = 0;
};

/// Multi-scale detection for LFK or HLSLW over params ordered from fine to
/// coarse (decreasing alpha). The first scale grows a community from every
/// not-yet-covered node in ascending id order; later scales regrow the
/// existing communities. Each scale ends by merging heavily overlapping
/// communities.
std::vector<LocalScaleResult> detect_local(const Graph& g, Criterion kind, std::span<const double> params,
                                           const LocalDetectOptions& options = {});

}  // namespace mscd
