#include "mscd/detect_local.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <string>

#include "mscd/errors.hpp"

namespace mscd {

namespace {

constexpr std::uint32_t kUnowned = std::numeric_limits<std::uint32_t>::max();

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be finite and > 0");
}

void require_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ArgumentError("eta must lie in (0, 1], got " + std::to_string(eta));
}

double internal_weight(const Graph& g, std::span<const NodeId> members) {
  return community_weights(g, members).internal;
}

std::vector<NodeId> intersection(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Worklist merging of overlapping communities. Communities keep their slot;
// merged-away slots are marked dead.
class OverlapMerger {
 public:
  OverlapMerger(const Graph& g, double eta, bool weighted, std::vector<std::vector<NodeId>> communities)
      : graph_(g),
        eta_(eta),
        weighted_(weighted),
        communities_(std::move(communities)),
        alive_(communities_.size(), 1),
        membership_(g.node_count()),
        overlap_(communities_.size(), 0) {
    for (std::uint32_t k = 0; k < communities_.size(); ++k) {
      for (NodeId v : communities_[k]) membership_[v].push_back(k);
    }
  }

  void run(std::deque<std::uint32_t> worklist) {
    while (!worklist.empty()) {
      const std::uint32_t c1 = worklist.front();
      worklist.pop_front();
      // A merge changes c1, so it is re-checked against everyone until stable.
      while (alive_[c1]) {
        const auto partner = first_partner(c1);
        if (!partner) break;
        absorb(c1, *partner);
      }
    }
  }

  std::size_t merges() const noexcept { return merges_; }

  std::vector<std::vector<NodeId>> survivors() && {
    std::vector<std::vector<NodeId>> out;
    for (std::size_t k = 0; k < communities_.size(); ++k) {
      if (alive_[k]) out.push_back(std::move(communities_[k]));
    }
    return out;
  }

 private:
  const Graph& graph_;
  double eta_;
  bool weighted_;
  std::vector<std::vector<NodeId>> communities_;
  std::vector<char> alive_;
  std::vector<std::vector<std::uint32_t>> membership_;
  std::vector<std::uint32_t> overlap_;
  std::size_t merges_ = 0;

  bool ratio_met(double shared, double size1, double size2) const {
    return (size2 > 0.0 && shared / size2 >= eta_) || (size1 > 0.0 && shared / size1 >= eta_);
  }

  bool should_merge(std::uint32_t c1, std::uint32_t c2, std::uint32_t shared) const {
    const auto& a = communities_[c1];
    const auto& b = communities_[c2];
    if (weighted_) {
      const double wa = internal_weight(graph_, a);
      const double wb = internal_weight(graph_, b);
      if (wa > 0.0 && wb > 0.0) {
        return ratio_met(internal_weight(graph_, intersection(a, b)), wa, wb);
      }
    }
    return ratio_met(shared, static_cast<double>(a.size()), static_cast<double>(b.size()));
  }

  std::optional<std::uint32_t> first_partner(std::uint32_t c1) {
    std::vector<std::uint32_t> sharing;
    for (NodeId v : communities_[c1]) {
      for (std::uint32_t k : membership_[v]) {
        if (k == c1) continue;
        if (overlap_[k]++ == 0) sharing.push_back(k);
      }
    }
    std::sort(sharing.begin(), sharing.end());
    std::optional<std::uint32_t> partner;
    for (std::uint32_t k : sharing) {
      if (!partner && should_merge(c1, k, overlap_[k])) partner = k;
      overlap_[k] = 0;
    }
    return partner;
  }

  void absorb(std::uint32_t c1, std::uint32_t c2) {
    auto& into = communities_[c1];
    auto& from = communities_[c2];
    for (NodeId v : from) {
      auto& m = membership_[v];
      m.erase(std::find(m.begin(), m.end(), c2));
      if (!std::binary_search(into.begin(), into.end(), v)) m.push_back(c1);
    }
    std::vector<NodeId> merged;
    merged.reserve(into.size() + from.size());
    std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(merged));
    into = std::move(merged);
    std::vector<NodeId>().swap(from);
    alive_[c2] = 0;
    ++merges_;
  }
};

}  // namespace

CommunityGrower::CommunityGrower(const Graph& g, Criterion kind)
    : graph_(g),
      kind_(kind),
      member_(g.node_count(), 0),
      to_community_(g.node_count(), 0.0),
      touched_flag_(g.node_count(), 0),
      version_(g.node_count(), 0) {
  if (!is_local(kind)) throw ArgumentError("CommunityGrower needs lfk or hlslw");
}

void CommunityGrower::touch(NodeId v) {
  if (!touched_flag_[v]) {
    touched_flag_[v] = 1;
    touched_.push_back(v);
  }
}

NodeContribution CommunityGrower::node_terms(NodeId v) const {
  return {to_community_[v], graph_.self_weight(v), graph_.strength(v)};
}

void CommunityGrower::add(NodeId v) {
  ledger_ = with_node(ledger_, node_terms(v));
  member_[v] = 1;
  touch(v);
  members_.push_back(v);
  for (const Edge& e : graph_.neighbors(v)) {
    if (e.target == v) continue;
    touch(e.target);
    to_community_[e.target] += e.weight;
  }
}

void CommunityGrower::remove(NodeId v) {
  ledger_ = without_node(ledger_, node_terms(v));
  member_[v] = 0;
  for (const Edge& e : graph_.neighbors(v)) {
    if (e.target != v) to_community_[e.target] -= e.weight;
  }
}

void CommunityGrower::reset() {
  for (NodeId v : touched_) {
    member_[v] = 0;
    to_community_[v] = 0.0;
    touched_flag_[v] = 0;
  }
  touched_.clear();
  members_.clear();
  ledger_ = {};
}

double CommunityGrower::frontier_key(NodeId v, double alpha) const {
  const double d_in = to_community_[v];
  if (kind_ == Criterion::HLSLW) return d_in;
  const double d_out = graph_.strength(v) - d_in;
  return 2.0 * d_in / std::pow(d_in + d_out, alpha);
}

bool CommunityGrower::improves_by_joining(NodeId v, double alpha) const {
  const NodeContribution node = node_terms(v);
  if (kind_ == Criterion::LFK) {
    const double now = lfk_fitness(ledger_, alpha);
    const double gain = lfk_fitness(with_node(ledger_, node), alpha) - now;
    return gain > 1e-12 * std::abs(now);
  }
  if (!(node.to_community > 0.0)) return false;
  // A community without internal similarity has T = 0; any inward similarity raises it.
  if (!(ledger_.internal > 0.0)) return true;
  return tightness_gain(ledger_, {node.to_community, node.strength - node.to_community}, alpha) > 0.0;
}

bool CommunityGrower::improves_by_leaving(NodeId v, double alpha) const {
  const NodeContribution node = node_terms(v);
  const LocalLedger rest = without_node(ledger_, node);
  if (kind_ == Criterion::LFK) {
    const double now = lfk_fitness(ledger_, alpha);
    return lfk_fitness(rest, alpha) - now > 1e-12 * std::abs(now);
  }
  if (!(node.to_community > 0.0)) return node.strength > 0.0;
  if (!(rest.internal > 0.0)) return false;
  return tightness_gain(rest, {node.to_community, node.strength - node.to_community}, alpha) < 0.0;
}

GrowResult CommunityGrower::grow(std::span<const NodeId> members, double alpha, std::size_t k_max,
                                 const std::function<bool(NodeId)>& may_join) {
  if (members.empty()) throw ContractViolation("grow_community: empty community");
  require_positive_alpha(alpha);

  std::vector<NodeId> initial(members.begin(), members.end());
  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());

  reset();
  for (NodeId v : initial) {
    if (v >= graph_.node_count()) throw ContractViolation("grow_community: node out of range");
    add(v);
  }
  std::size_t size = initial.size();

  std::priority_queue<Entry, std::vector<Entry>, EntryOrder> frontier;
  auto consider = [&](NodeId v) {
    if (member_[v] || !(to_community_[v] > 0.0)) return;
    if (may_join && !may_join(v)) return;
    frontier.push({frontier_key(v, alpha), v, ++version_[v]});
  };
  for (NodeId v : std::vector<NodeId>(touched_)) consider(v);

  GrowResult result;
  while (!frontier.empty()) {
    const Entry top = frontier.top();
    frontier.pop();
    if (member_[top.node] || top.version != version_[top.node]) continue;
    if (!improves_by_joining(top.node, alpha)) continue;
    add(top.node);
    ++size;
    ++result.stats.added;
    for (const Edge& e : graph_.neighbors(top.node)) {
      if (e.target != top.node) consider(e.target);
    }
  }

  if (result.stats.added > 0) {
    for (std::size_t pass = 0; pass < k_max; ++pass) {
      ++result.stats.cleanup_passes;
      std::sort(members_.begin(), members_.end());
      std::size_t removed = 0;
      for (NodeId v : members_) {
        if (size <= 1) break;
        if (improves_by_leaving(v, alpha)) {
          remove(v);
          --size;
          ++removed;
        }
      }
      std::erase_if(members_, [&](NodeId v) { return !member_[v]; });
      result.stats.removed += removed;
      if (removed == 0) break;
    }
  }

  result.members = members_;
  std::sort(result.members.begin(), result.members.end());
  result.changed = result.members != initial;
  reset();
  return result;
}

double CommunityGrower::community_value(std::span<const NodeId> members, double alpha) const {
  const LocalLedger ledger = ledger_of(graph_, members);
  if (kind_ == Criterion::LFK) return lfk_fitness(ledger, alpha);
  return ledger.internal + ledger.external > 0.0 ? tightness(ledger) : 0.0;
}

GrowResult grow_community(const Graph& g, std::span<const NodeId> community, Criterion kind, double alpha,
                          std::size_t k_max) {
  CommunityGrower grower(g, kind);
  return grower.grow(community, alpha, k_max);
}

bool encompasses(std::span<const NodeId> c1, std::span<const NodeId> c2) {
  std::size_t p = 0;
  for (NodeId v : c2) {
    while (p < c1.size() && c1[p] < v) ++p;
    if (p == c1.size() || c1[p] != v) return false;
    ++p;
  }
  return true;
}

Cover merge_overlapping(const Cover& cover, double eta, bool weighted, const Graph& g) {
  require_eta(eta);
  if (cover.node_count() != g.node_count()) throw ArgumentError("cover and graph span different node sets");
  OverlapMerger merger(g, eta, weighted, cover.communities());
  std::deque<std::uint32_t> all(cover.community_count());
  for (std::uint32_t k = 0; k < all.size(); ++k) all[k] = k;
  merger.run(std::move(all));
  return Cover(g.node_count(), std::move(merger).survivors());
}

std::vector<LocalScaleResult> detect_local(const Graph& g, Criterion kind, std::span<const double> params,
                                           const LocalDetectOptions& options) {
  if (!is_local(kind)) throw ArgumentError("detect_local needs lfk or hlslw");
  require_increasing_scale(kind, params);
  for (double alpha : params) require_positive_alpha(alpha);
  require_eta(options.eta);

  Graph similarity;
  const Graph* work = &g;
  if (kind == Criterion::HLSLW) {
    similarity = similarity_graph(g, options.neighbourhood);
    work = &similarity;
  }
  const std::size_t n = g.node_count();
  CommunityGrower grower(*work, kind);

  std::vector<std::vector<NodeId>> communities;
  std::vector<std::uint32_t> owner(n, kUnowned);
  const bool exclusive = !options.allow_overlap;

  std::vector<LocalScaleResult> results;
  results.reserve(params.size());
  for (std::size_t scale = 0; scale < params.size(); ++scale) {
    const double alpha = params[scale];
    LocalScaleResult record;
    record.param = alpha;
    std::deque<std::uint32_t> worklist;

    if (scale == 0) {
      std::vector<char> covered(n, 0);
      for (NodeId seed = 0; seed < n; ++seed) {
        if (covered[seed]) continue;
        const auto id = static_cast<std::uint32_t>(communities.size());
        std::function<bool(NodeId)> may_join;
        if (exclusive) may_join = [&](NodeId v) { return owner[v] == kUnowned; };
        GrowResult grown = grower.grow(std::span<const NodeId>(&seed, 1), alpha, options.max_cleanup_passes, may_join);
        ++record.regrown;
        covered[seed] = 1;
        for (NodeId v : grown.members) {
          covered[v] = 1;
          if (exclusive) owner[v] = id;
        }
        communities.push_back(std::move(grown.members));
        worklist.push_back(id);
      }
    } else {
      std::vector<char> alive(communities.size(), 1);
      std::vector<std::vector<std::uint32_t>> by_first_node(n);
      for (std::uint32_t k = 0; k < communities.size(); ++k) by_first_node[communities[k].front()].push_back(k);

      for (std::uint32_t idx = 0; idx < communities.size(); ++idx) {
        if (!alive[idx]) continue;
        std::function<bool(NodeId)> may_join;
        if (exclusive) may_join = [&](NodeId v) { return owner[v] == kUnowned || owner[v] == idx; };
        GrowResult grown = grower.grow(communities[idx], alpha, options.max_cleanup_passes, may_join);
        ++record.regrown;
        if (!grown.changed) continue;
        ++record.changed;
        if (exclusive) {
          for (NodeId v : communities[idx]) owner[v] = kUnowned;
          for (NodeId v : grown.members) owner[v] = idx;
        }
        communities[idx] = std::move(grown.members);
        worklist.push_back(idx);
        for (NodeId v : communities[idx]) {
          for (std::uint32_t later : by_first_node[v]) {
            if (later > idx && alive[later] && encompasses(communities[idx], communities[later])) {
              alive[later] = 0;
              ++record.dropped_encompassed;
            }
          }
        }
      }

      if (record.dropped_encompassed > 0) {
        std::vector<std::uint32_t> remap(communities.size(), kUnowned);
        std::vector<std::vector<NodeId>> kept;
        for (std::uint32_t k = 0; k < communities.size(); ++k) {
          if (!alive[k]) continue;
          remap[k] = static_cast<std::uint32_t>(kept.size());
          kept.push_back(std::move(communities[k]));
        }
        communities = std::move(kept);
        std::deque<std::uint32_t> remapped;
        for (std::uint32_t k : worklist) {
          if (remap[k] != kUnowned) remapped.push_back(remap[k]);
        }
        worklist = std::move(remapped);
        if (exclusive) {
          for (auto& o : owner) {
            if (o != kUnowned) o = remap[o];
          }
        }
      }
    }

    if (options.allow_overlap) {
      OverlapMerger merger(g, options.eta, options.weighted_merge, std::move(communities));
      merger.run(std::move(worklist));
      record.merges = merger.merges();
      communities = std::move(merger).survivors();
    }

    double total = 0.0;
    for (const auto& c : communities) total += grower.community_value(c, alpha);
    record.quality = communities.empty() ? 0.0 : total / static_cast<double>(communities.size());
    record.cover = Cover(n, communities);
    results.push_back(std::move(record));
  }
  return results;
}

}  // namespace mscd
