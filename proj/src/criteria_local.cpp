#include "mscd/criteria_local.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mscd/errors.hpp"

namespace mscd {

LocalLedger ledger_of(const Graph& g, std::span<const NodeId> members) {
  const CommunityWeights w = community_weights(g, members);
  return {w.internal, w.total - w.internal};
}

NodeContribution contribution(const Graph& g, std::span<const NodeId> sorted_members, NodeId i) {
  NodeContribution c;
  c.self = g.self_weight(i);
  c.strength = g.strength(i);
  for (const Edge& e : g.neighbors(i)) {
    if (e.target != i && std::binary_search(sorted_members.begin(), sorted_members.end(), e.target)) {
      c.to_community += e.weight;
    }
  }
  return c;
}

LocalLedger with_node(const LocalLedger& ledger, const NodeContribution& node) noexcept {
  const double gained = 2.0 * node.to_community + node.self;
  return {ledger.internal + gained, ledger.external + node.strength - gained};
}

LocalLedger without_node(const LocalLedger& ledger, const NodeContribution& node) noexcept {
  const double lost = 2.0 * node.to_community + node.self;
  return {ledger.internal - lost, ledger.external - node.strength + lost};
}

double lfk_fitness(const LocalLedger& ledger, double alpha) {
  const double total = ledger.internal + ledger.external;
  if (ledger.internal <= 0.0 || total <= 0.0) return 0.0;
  return ledger.internal / std::pow(total, alpha);
}

double lfk_node_gain(const Graph& g, std::span<const NodeId> sorted_members, NodeId i, double alpha) {
  if (sorted_members.empty()) throw ContractViolation("lfk_node_gain: empty community");
  if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
  const bool member = std::binary_search(sorted_members.begin(), sorted_members.end(), i);
  const NodeContribution node = contribution(g, sorted_members, i);
  const LocalLedger current = ledger_of(g, sorted_members);
  if (member) return lfk_fitness(current, alpha) - lfk_fitness(without_node(current, node), alpha);
  if (!(node.to_community > 0.0)) {
    throw ContractViolation("lfk_node_gain: node " + std::to_string(i) + " is neither a member nor adjacent");
  }
  return lfk_fitness(with_node(current, node), alpha) - lfk_fitness(current, alpha);
}

double tightness(const LocalLedger& ledger) {
  const double total = ledger.internal + ledger.external;
  if (!(total > 0.0)) throw DomainError("tightness is undefined when S_in + S_out = 0");
  return ledger.internal / total;
}

double tightness_gain(const LocalLedger& community, const LocalLedger& node, double alpha) {
  if (!(community.internal > 0.0)) throw DomainError("tightness gain is undefined for S_in = 0");
  if (!(node.internal > 0.0)) throw DomainError("tightness gain is undefined for a node with no similarity inward");
  return community.external / community.internal - (alpha * node.external - node.internal) / (2.0 * node.internal);
}

namespace {

double own_weight(const Graph& g, NodeId i) { return g.self_weight(i) > 0.0 ? g.self_weight(i) / 2.0 : 1.0; }

double neighbourhood_norm(const Graph& g, NodeId i, bool closed) {
  double sq = 0.0;
  for (const Edge& e : g.neighbors(i)) {
    if (e.weight < 0.0) throw DomainError("similarity needs non-negative weights");
    if (e.target != i) sq += e.weight * e.weight;
  }
  if (closed) sq += own_weight(g, i) * own_weight(g, i);
  return std::sqrt(sq);
}

// Numerator of the similarity: sum over shared neighbourhood members of w(i,k) w(k,j).
double shared_weight(const Graph& g, NodeId i, NodeId j, bool closed) {
  double shared = 0.0;
  auto ri = g.neighbors(i);
  auto rj = g.neighbors(j);
  std::size_t p = 0, q = 0;
  while (p < ri.size() && q < rj.size()) {
    if (ri[p].target < rj[q].target) {
      ++p;
    } else if (rj[q].target < ri[p].target) {
      ++q;
    } else {
      const NodeId k = ri[p].target;
      if (k != i && k != j) shared += ri[p].weight * rj[q].weight;
      ++p;
      ++q;
    }
  }
  if (closed) {
    const double wij = g.weight(i, j);
    shared += own_weight(g, i) * wij + wij * own_weight(g, j);
  }
  return shared;
}

}  // namespace

double structural_similarity(const Graph& g, NodeId i, NodeId j, Neighbourhood mode) {
  const bool closed = mode == Neighbourhood::Closed;
  if (i == j) throw ContractViolation("structural_similarity: i and j must differ");
  const double denom = neighbourhood_norm(g, i, closed) * neighbourhood_norm(g, j, closed);
  return denom > 0.0 ? shared_weight(g, i, j, closed) / denom : 0.0;
}

Graph similarity_graph(const Graph& g, Neighbourhood mode) {
  const std::size_t n = g.node_count();
  const bool closed = mode == Neighbourhood::Closed;

  std::vector<double> norm(n);
  for (NodeId i = 0; i < n; ++i) norm[i] = neighbourhood_norm(g, i, closed);

  std::vector<std::vector<Edge>> rows(n);
  for (NodeId i = 0; i < n; ++i) {
    for (const Edge& ij : g.neighbors(i)) {
      const NodeId j = ij.target;
      if (j <= i) continue;
      const double denom = norm[i] * norm[j];
      const double s = denom > 0.0 ? shared_weight(g, i, j, closed) / denom : 0.0;
      if (s > 0.0) {
        rows[i].push_back({j, s});
        rows[j].push_back({i, s});
      }
    }
  }
  return Graph::from_rows(std::move(rows), {g.labels().begin(), g.labels().end()});
}

}  // namespace mscd
