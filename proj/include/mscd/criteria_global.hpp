#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "mscd/criterion.hpp"
#include "mscd/graph.hpp"

namespace mscd {

struct GlobalCriterion {
  Criterion kind;
  double param;  ///< gamma for RB and RN, r for AFG, t for SO
};

/// Ledger entries needed to price a move or a merge.
struct CommunityTotals {
  double null_total = 0.0;  ///< sum of null-model strengths of the members
  std::size_t size = 0;
};

/// A global criterion bound to a graph and a scale value.
///
/// Two families are covered. The modularity family (RB, AFG, SO) evaluates
///
///   Q = 1/2m' * sum_c [ W_in(c) - gamma * D(c)^2 / 2m' ]
///
/// where W is the weight matrix (A, A + rI, or the walk network A_t), D(c)
/// sums the null-model strengths (d_i, d_i + r, d_i) and 2m' is their total.
/// RN evaluates the negated constant-Potts energy
///
///   Q = 1/2 * sum_c [ (1 + gamma) * E(c) - gamma * |c| (|c| - 1) ]
///
/// with E(c) the off-diagonal internal weight, so every criterion is maximised.
class QualityModel {
 public:
  static QualityModel reichardt_bornholdt(const Graph& g, double gamma);
  static QualityModel arenas(const Graph& g, double r);
  static QualityModel ronhovde_nussinov(const Graph& g, double gamma);
  /// Walk network for the stability criterion; null model stays the original graph.
  static QualityModel stability(const Graph& g, std::shared_ptr<const Graph> walk, double t);

  Criterion kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }

  /// The input graph: defines adjacency, connectivity, and null strengths.
  const Graph& graph() const noexcept { return *graph_; }
  /// The matrix whose internal weights are rewarded. Same as graph() except for SO.
  const Graph& weights() const noexcept { return *weights_; }

  double null_strength(NodeId i) const noexcept { return graph_->strength(i) + shift_; }
  double null_total_weight() const noexcept { return two_m_; }
  CommunityTotals totals(std::span<const NodeId> members) const noexcept;

  /// From-scratch value of the criterion.
  double evaluate(const Partition& p) const;

  /// Change from moving node i between communities.
  /// k_from: weight from i to the other members of its community (self-loop excluded).
  /// k_to: weight from i to the target community.
  /// from/to: totals before the move, from still containing i.
  double move_gain(NodeId i, double k_from, double k_to, const CommunityTotals& from,
                   const CommunityTotals& to) const noexcept;

  /// Change from merging two communities joined by `between` (sum of W_ij, i in a, j in b).
  double merge_gain(double between, const CommunityTotals& a, const CommunityTotals& b) const noexcept;

  /// Partition-level forms. Neither mutates p. A move target equal to
  /// p.community_count() stands for a new, empty community.
  double delta_move(const Partition& p, NodeId i, CommunityId target) const;
  double delta_merge(const Partition& p, CommunityId a, CommunityId b) const;

  /// Gains at or below this are treated as zero by the optimisers.
  double gain_tolerance() const noexcept;

 private:
  QualityModel() = default;

  Criterion kind_ = Criterion::RB;
  double param_ = 1.0;
  const Graph* graph_ = nullptr;
  const Graph* weights_ = nullptr;
  std::shared_ptr<const Graph> owned_weights_;
  double gamma_ = 1.0;
  double shift_ = 0.0;  ///< added to the diagonal (AFG)
  double two_m_ = 0.0;
};

/// Model for RB, AFG or RN. SO needs a walk network: see make_quality_model in stability_walk.hpp.
QualityModel make_quality_model(const Graph& g, const GlobalCriterion& crit);

double modularity(const Graph& g, const Partition& p);
double q_rb(const Graph& g, const Partition& p, double gamma);
double q_afg(const Graph& g, const Partition& p, double r);
double q_rn(const Graph& g, const Partition& p, double gamma);

double delta_move(const Graph& g, const Partition& p, const GlobalCriterion& crit, NodeId node, CommunityId target);
double delta_merge(const Graph& g, const Partition& p, const GlobalCriterion& crit, CommunityId a, CommunityId b);

}  // namespace mscd
