#include "mscd/detect_global.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mscd/errors.hpp"

namespace mscd {

namespace {

constexpr CommunityId kNone = std::numeric_limits<CommunityId>::max();

class GlobalOptimizer {
 public:
  GlobalOptimizer(const QualityModel& model, const Partition& initial, std::uint64_t seed,
                  const GlobalDetectOptions& options)
      : model_(model),
        graph_(model.graph()),
        weights_(model.weights()),
        shared_adjacency_(&model.graph() == &model.weights()),
        n_(graph_.node_count()),
        options_(options),
        rng_(seed),
        community_(n_),
        position_(n_),
        members_(n_),
        null_total_(n_, 0.0),
        acc_(n_, 0.0),
        acc_used_(n_, 0),
        candidate_mark_(n_, 0),
        visit_(n_, 0) {
    if (initial.node_count() != n_) throw ContractViolation("initial partition does not cover the graph");
    for (NodeId i = 0; i < n_; ++i) {
      const CommunityId c = initial.community_of(i);
      community_[i] = c;
      position_[i] = members_[c].size();
      members_[c].push_back(i);
      null_total_[c] += model_.null_strength(i);
    }
    quality_ = model_.evaluate(initial);
  }

  GlobalScaleResult run() {
    for (;;) {
      if (++stats_.alternations > options_.pass_cap) {
        throw ContractViolation("optimize_at_scale: exceeded " + std::to_string(options_.pass_cap) +
                                " phase alternations; gains and recomputed quality disagree");
      }
      repeat_passes([this] { return node_pass(); }, stats_.node_passes);
      if (options_.audit) audit("node phase");
      const std::size_t merged = repeat_passes([this] { return merge_pass(); }, stats_.merge_passes);
      if (options_.audit) audit("merge phase");
      if (merged == 0) break;
    }
    GlobalScaleResult result;
    result.param = model_.param();
    result.partition = Partition::from_assignment(community_);
    result.quality = model_.evaluate(result.partition);
    result.stats = stats_;
    return result;
  }

 private:
  const QualityModel& model_;
  const Graph& graph_;
  const Graph& weights_;
  bool shared_adjacency_;
  std::size_t n_;
  GlobalDetectOptions options_;
  std::mt19937_64 rng_;

  std::vector<CommunityId> community_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<NodeId>> members_;
  std::vector<double> null_total_;
  double quality_ = 0.0;
  OptimizeStats stats_;

  // Scratch space, always left zeroed between uses.
  std::vector<double> acc_;
  std::vector<char> acc_used_;
  std::vector<CommunityId> touched_;
  std::vector<char> candidate_mark_;
  std::vector<CommunityId> candidates_;
  std::vector<std::uint32_t> visit_;
  std::uint32_t visit_stamp_ = 0;
  std::vector<NodeId> bfs_queue_;

  template <class Pass>
  std::size_t repeat_passes(Pass pass, std::size_t& counter) {
    std::size_t total = 0;
    for (std::size_t passes = 0;; ++passes) {
      if (passes >= options_.pass_cap) {
        throw ContractViolation("optimize_at_scale: exceeded " + std::to_string(options_.pass_cap) +
                                " passes within one phase");
      }
      ++counter;
      const std::size_t changes = pass();
      if (changes == 0) break;
      total += changes;
    }
    return total;
  }

  CommunityTotals totals(CommunityId c) const { return {null_total_[c], members_[c].size()}; }

  void accumulate(CommunityId c, double w) {
    if (!acc_used_[c]) {
      acc_used_[c] = 1;
      touched_.push_back(c);
    }
    acc_[c] += w;
  }

  void clear_accumulators() {
    for (CommunityId c : touched_) {
      acc_[c] = 0.0;
      acc_used_[c] = 0;
    }
    touched_.clear();
    for (CommunityId c : candidates_) candidate_mark_[c] = 0;
    candidates_.clear();
  }

  void add_candidate(CommunityId c) {
    if (!candidate_mark_[c]) {
      candidate_mark_[c] = 1;
      candidates_.push_back(c);
    }
  }

  // Does community c stay connected in the input graph once `excluded` leaves?
  bool stays_connected(CommunityId c, NodeId excluded) {
    const auto& group = members_[c];
    if (group.size() <= 2) return true;
    ++stats_.connectivity_checks;
    if (++visit_stamp_ == 0) {
      std::fill(visit_.begin(), visit_.end(), 0);
      visit_stamp_ = 1;
    }
    const NodeId start = group[0] != excluded ? group[0] : group[1];
    bfs_queue_.clear();
    bfs_queue_.push_back(start);
    visit_[start] = visit_stamp_;
    visit_[excluded] = visit_stamp_;
    std::size_t head = 0;
    while (head < bfs_queue_.size()) {
      const NodeId u = bfs_queue_[head++];
      for (const Edge& e : graph_.neighbors(u)) {
        const NodeId v = e.target;
        if (visit_[v] == visit_stamp_ || community_[v] != c) continue;
        visit_[v] = visit_stamp_;
        bfs_queue_.push_back(v);
      }
    }
    return bfs_queue_.size() == group.size() - 1;
  }

  void detach(NodeId i) {
    auto& group = members_[community_[i]];
    const std::size_t pos = position_[i];
    group[pos] = group.back();
    position_[group[pos]] = pos;
    group.pop_back();
    null_total_[community_[i]] -= model_.null_strength(i);
  }

  void attach(NodeId i, CommunityId c) {
    community_[i] = c;
    position_[i] = members_[c].size();
    members_[c].push_back(i);
    null_total_[c] += model_.null_strength(i);
  }

  std::size_t node_pass() {
    std::vector<NodeId> order(n_);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng_);

    std::size_t moves = 0;
    for (NodeId i : order) {
      const CommunityId source = community_[i];
      for (const Edge& e : weights_.neighbors(i)) {
        if (e.target != i) accumulate(community_[e.target], e.weight);
      }
      for (const Edge& e : graph_.neighbors(i)) {
        if (e.target != i && community_[e.target] != source) add_candidate(community_[e.target]);
      }
      const double k_from = acc_[source];
      const CommunityTotals from = totals(source);

      double best_gain = model_.gain_tolerance();
      CommunityId best = kNone;
      int connected = -1;  // unknown until a candidate needs it
      for (CommunityId c : candidates_) {
        const double gain = model_.move_gain(i, k_from, acc_[c], from, totals(c));
        if (!(gain > best_gain)) continue;
        if (connected < 0) {
          connected = stays_connected(source, i) ? 1 : 0;
          if (!connected) ++stats_.rejected_by_connectivity;
        }
        if (!connected) break;
        best_gain = gain;
        best = c;
      }
      clear_accumulators();

      if (best != kNone) {
        detach(i);
        attach(i, best);
        quality_ += best_gain;
        ++moves;
      }
    }
    stats_.node_moves += moves;
    return moves;
  }

  std::size_t merge_pass() {
    std::vector<CommunityId> order;
    for (CommunityId c = 0; c < n_; ++c) {
      if (!members_[c].empty()) order.push_back(c);
    }
    std::shuffle(order.begin(), order.end(), rng_);

    std::size_t merges = 0;
    for (CommunityId c : order) {
      if (members_[c].empty()) continue;
      for (NodeId v : members_[c]) {
        for (const Edge& e : weights_.neighbors(v)) {
          const CommunityId other = community_[e.target];
          if (other != c) accumulate(other, e.weight);
        }
        if (!shared_adjacency_) {
          for (const Edge& e : graph_.neighbors(v)) {
            if (community_[e.target] != c) add_candidate(community_[e.target]);
          }
        }
      }
      const auto& neighbours = shared_adjacency_ ? touched_ : candidates_;
      const CommunityTotals own = totals(c);
      double best_gain = model_.gain_tolerance();
      CommunityId best = kNone;
      for (CommunityId other : neighbours) {
        const double gain = model_.merge_gain(acc_[other], own, totals(other));
        if (gain > best_gain) {
          best_gain = gain;
          best = other;
        }
      }
      clear_accumulators();

      if (best != kNone) {
        merge(c, best);
        quality_ += best_gain;
        ++merges;
      }
    }
    stats_.merges += merges;
    return merges;
  }

  void merge(CommunityId a, CommunityId b) {
    if (members_[a].size() < members_[b].size()) std::swap(a, b);
    auto moving = std::move(members_[b]);
    members_[b].clear();
    null_total_[b] = 0.0;
    for (NodeId v : moving) attach(v, a);
  }

  void audit(const char* where) {
    const Partition p = Partition::from_assignment(community_);
    const double fresh = model_.evaluate(p);
    if (std::abs(fresh - quality_) > 1e-9 * std::max(1.0, std::abs(fresh))) {
      throw ContractViolation(std::string("audit after ") + where + ": tracked Q " + std::to_string(quality_) +
                              " differs from recomputed " + std::to_string(fresh));
    }
    for (const auto& group : p.communities()) {
      if (!community_connected(graph_, group)) {
        throw ContractViolation(std::string("audit after ") + where + ": disconnected community");
      }
    }
  }
};

}  // namespace

std::uint64_t scale_seed(std::uint64_t seed, std::size_t index) noexcept {
  // splitmix64 over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GlobalScaleResult optimize_at_scale(const QualityModel& model, const Partition& initial, std::uint64_t seed,
                                    const GlobalDetectOptions& options) {
  return GlobalOptimizer(model, initial, seed, options).run();
}

GlobalScaleResult optimize_at_scale(const Graph& g, const GlobalCriterion& crit, const Partition& initial,
                                    std::uint64_t seed, const GlobalDetectOptions& options) {
  if (crit.kind == Criterion::SO) {
    WalkCache cache(g, crit.param > 1.0 ? kDefaultWalkThreshold : 0.0);
    return optimize_at_scale(make_quality_model(g, crit, cache), initial, seed, options);
  }
  return optimize_at_scale(make_quality_model(g, crit), initial, seed, options);
}

std::vector<GlobalScaleResult> detect_global(const Graph& g, Criterion kind, std::span<const double> params,
                                             double tau, std::uint64_t seed, const GlobalDetectOptions& options) {
  if (!is_global(kind)) throw ArgumentError("detect_global needs rb, afg, rn or so");
  require_increasing_scale(kind, params);

  WalkCache cache(g, tau);
  std::vector<GlobalScaleResult> results;
  results.reserve(params.size());
  Partition current = Partition::singletons(g.node_count());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const QualityModel model = make_quality_model(g, {kind, params[k]}, cache);
    results.push_back(optimize_at_scale(model, current, scale_seed(seed, k), options));
    current = results.back().partition;
  }
  return results;
}

}  // namespace mscd
