#pragma once

#include <span>

#include "mscd/graph.hpp"

namespace mscd {

/// Internal/external weight of one community.
///
/// For LFK, internal is k_in: the sum of member degrees into the community,
/// so every internal edge counts twice and internal + external equals the
/// total member strength. For HLSLW the same ledger holds S_in and S_out over
/// similarity weights, with S_in also summed over ordered member pairs.
struct LocalLedger {
  double internal = 0.0;
  double external = 0.0;
};

/// What one node brings to (or takes from) a community's ledger.
struct NodeContribution {
  double to_community = 0.0;  ///< weight from the node to the other members
  double self = 0.0;          ///< diagonal entry A_ii
  double strength = 0.0;      ///< row sum, diagonal included
};

LocalLedger ledger_of(const Graph& g, std::span<const NodeId> members);
NodeContribution contribution(const Graph& g, std::span<const NodeId> sorted_members, NodeId i);

LocalLedger with_node(const LocalLedger& ledger, const NodeContribution& node) noexcept;
LocalLedger without_node(const LocalLedger& ledger, const NodeContribution& node) noexcept;

/// LFK fitness k_in / (k_in + k_out)^alpha; 0 for an empty ledger.
double lfk_fitness(const LocalLedger& ledger, double alpha);

/// f(c + i) - f(c - i): the join gain for a neighbour of c, the retention
/// value for a member. sorted_members must be non-empty and sorted.
/// Throws ContractViolation when i is neither a member nor adjacent.
double lfk_node_gain(const Graph& g, std::span<const NodeId> sorted_members, NodeId i, double alpha);

/// T = S_in / (S_in + S_out). DomainError when both are zero.
double tightness(const LocalLedger& similarity_ledger);

/// Join gain of a candidate for a community under the tightness criterion:
///
///   S_out(c) / S_in(c) - (alpha * s_out(i) - s_in(i)) / (2 * s_in(i))
///
/// where s_in(i) is the candidate's similarity into the community and s_out(i)
/// the rest of its similarity. At alpha = 1 the gain is positive exactly when
/// adding i raises T; larger alpha makes joining harder. When the node terms
/// equal the community's own ledger this is the formula with every S taken
/// from the community. DomainError when S_in(c) or s_in(i) is zero.
double tightness_gain(const LocalLedger& community, const LocalLedger& node, double alpha);

enum class Neighbourhood {
  Open,    ///< Gamma(i) = adjacent nodes only
  Closed,  ///< Gamma(i) also holds i, with w(i, i) = 1 unless i has a self-loop
};

/// Graph on the same nodes and edges (self-loops dropped) whose weights are
/// structural similarities
///
///   s(i, j) = sum_{k in Gamma(i) & Gamma(j)} w(i,k) w(k,j) / (|w(i,.)| |w(j,.)|)
///
/// Pairs with zero similarity are left out. DomainError on negative weights.
Graph similarity_graph(const Graph& g, Neighbourhood mode = Neighbourhood::Open);

/// s(i, j) for any pair of distinct nodes, adjacent or not.
double structural_similarity(const Graph& g, NodeId i, NodeId j, Neighbourhood mode = Neighbourhood::Open);

}  // namespace mscd
