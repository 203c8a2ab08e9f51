#include "mscd/criteria_global.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mscd/errors.hpp"

namespace mscd {

namespace {

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be a finite value >= 0");
  }
}

bool is_modularity_family(Criterion k) { return k != Criterion::RN; }

}  // namespace

QualityModel QualityModel::reichardt_bornholdt(const Graph& g, double gamma) {
  require_nonnegative(gamma, "gamma");
  if (!(g.total_weight() > 0.0)) throw DomainError("modularity is undefined on a graph without edges");
  QualityModel m;
  m.kind_ = Criterion::RB;
  m.param_ = gamma;
  m.graph_ = m.weights_ = &g;
  m.gamma_ = gamma;
  m.two_m_ = g.total_weight();
  return m;
}

QualityModel QualityModel::arenas(const Graph& g, double r) {
  // r = 0 is plain modularity and stays valid on graphs with isolated nodes.
  if (!std::isfinite(r) || (r != 0.0 && !(r > -g.min_strength()))) {
    throw DomainError("r must exceed -min strength (" + std::to_string(-g.min_strength()) + ")");
  }
  QualityModel m;
  m.kind_ = Criterion::AFG;
  m.param_ = r;
  m.graph_ = m.weights_ = &g;
  m.shift_ = r;
  m.two_m_ = g.total_weight() + static_cast<double>(g.node_count()) * r;
  if (!(m.two_m_ > 0.0)) throw DomainError("A + rI has no positive weight");
  return m;
}

QualityModel QualityModel::ronhovde_nussinov(const Graph& g, double gamma) {
  require_nonnegative(gamma, "gamma");
  QualityModel m;
  m.kind_ = Criterion::RN;
  m.param_ = gamma;
  m.graph_ = m.weights_ = &g;
  m.gamma_ = gamma;
  m.two_m_ = g.total_weight();
  return m;
}

QualityModel QualityModel::stability(const Graph& g, std::shared_ptr<const Graph> walk, double t) {
  if (!walk || walk->node_count() != g.node_count()) {
    throw ContractViolation("walk network must span the same nodes as the graph");
  }
  if (!(g.total_weight() > 0.0)) throw DomainError("stability is undefined on a graph without edges");
  QualityModel m;
  m.kind_ = Criterion::SO;
  m.param_ = t;
  m.graph_ = &g;
  m.weights_ = walk.get();
  m.owned_weights_ = std::move(walk);
  m.two_m_ = g.total_weight();
  return m;
}

CommunityTotals QualityModel::totals(std::span<const NodeId> members) const noexcept {
  CommunityTotals t;
  t.size = members.size();
  for (NodeId i : members) t.null_total += null_strength(i);
  return t;
}

double QualityModel::evaluate(const Partition& p) const {
  if (p.node_count() != graph_->node_count()) throw ContractViolation("partition does not cover the graph");
  const std::size_t k = p.community_count();
  std::vector<double> offdiag(k, 0.0), diag(k, 0.0), null_total(k, 0.0);
  for (NodeId i = 0; i < graph_->node_count(); ++i) {
    const CommunityId c = p.community_of(i);
    null_total[c] += null_strength(i);
    for (const Edge& e : weights_->neighbors(i)) {
      if (e.target == i) {
        diag[c] += e.weight;
      } else if (p.community_of(e.target) == c) {
        offdiag[c] += e.weight;
      }
    }
  }

  double q = 0.0;
  if (is_modularity_family(kind_)) {
    for (CommunityId c = 0; c < k; ++c) {
      const double internal = offdiag[c] + diag[c] + shift_ * static_cast<double>(p.members(c).size());
      q += internal - gamma_ * null_total[c] * null_total[c] / two_m_;
    }
    return q / two_m_;
  }
  for (CommunityId c = 0; c < k; ++c) {
    const auto size = static_cast<double>(p.members(c).size());
    q += (1.0 + gamma_) * offdiag[c] - gamma_ * size * (size - 1.0);
  }
  return q / 2.0;
}

double QualityModel::move_gain(NodeId i, double k_from, double k_to, const CommunityTotals& from,
                               const CommunityTotals& to) const noexcept {
  if (is_modularity_family(kind_)) {
    // Every internal pair appears twice in the ordered-pair sum, hence 2 * k.
    const double d = null_strength(i);
    return (2.0 * (k_to - k_from) - gamma_ * 2.0 * d * (to.null_total - from.null_total + d) / two_m_) / two_m_;
  }
  const double size_change = static_cast<double>(to.size) - static_cast<double>(from.size) + 1.0;
  return (1.0 + gamma_) * (k_to - k_from) - gamma_ * size_change;
}

double QualityModel::merge_gain(double between, const CommunityTotals& a, const CommunityTotals& b) const noexcept {
  if (is_modularity_family(kind_)) {
    return (2.0 * between - gamma_ * 2.0 * a.null_total * b.null_total / two_m_) / two_m_;
  }
  return (1.0 + gamma_) * between - gamma_ * static_cast<double>(a.size) * static_cast<double>(b.size);
}

double QualityModel::delta_move(const Partition& p, NodeId i, CommunityId target) const {
  if (i >= p.node_count() || target > p.community_count()) throw ContractViolation("delta_move: id out of range");
  const CommunityId source = p.community_of(i);
  if (source == target) throw ContractViolation("delta_move: node is already in the target community");
  double k_from = 0.0, k_to = 0.0;
  for (const Edge& e : weights_->neighbors(i)) {
    if (e.target == i) continue;
    const CommunityId c = p.community_of(e.target);
    if (c == source) k_from += e.weight;
    else if (c == target) k_to += e.weight;
  }
  const CommunityTotals to = target == p.community_count() ? CommunityTotals{} : totals(p.members(target));
  return move_gain(i, k_from, k_to, totals(p.members(source)), to);
}

double QualityModel::delta_merge(const Partition& p, CommunityId a, CommunityId b) const {
  if (a >= p.community_count() || b >= p.community_count()) throw ContractViolation("delta_merge: id out of range");
  if (a == b) throw ContractViolation("delta_merge: cannot merge a community with itself");
  double between = 0.0;
  for (NodeId i : p.members(a)) {
    for (const Edge& e : weights_->neighbors(i)) {
      if (p.community_of(e.target) == b) between += e.weight;
    }
  }
  return merge_gain(between, totals(p.members(a)), totals(p.members(b)));
}

double QualityModel::gain_tolerance() const noexcept {
  // Q is normalised by 2m' for the modularity family but not for RN.
  constexpr double relative = 1e-13;
  return is_modularity_family(kind_) ? relative : relative * std::max(1.0, two_m_);
}

QualityModel make_quality_model(const Graph& g, const GlobalCriterion& crit) {
  switch (crit.kind) {
    case Criterion::RB: return QualityModel::reichardt_bornholdt(g, crit.param);
    case Criterion::AFG: return QualityModel::arenas(g, crit.param);
    case Criterion::RN: return QualityModel::ronhovde_nussinov(g, crit.param);
    case Criterion::SO: throw ContractViolation("stability needs a walk cache; use the stability_walk overload");
    default: throw ContractViolation("not a global criterion");
  }
}

double modularity(const Graph& g, const Partition& p) { return QualityModel::reichardt_bornholdt(g, 1.0).evaluate(p); }

double q_rb(const Graph& g, const Partition& p, double gamma) {
  return QualityModel::reichardt_bornholdt(g, gamma).evaluate(p);
}

double q_afg(const Graph& g, const Partition& p, double r) { return QualityModel::arenas(g, r).evaluate(p); }

double q_rn(const Graph& g, const Partition& p, double gamma) {
  return QualityModel::ronhovde_nussinov(g, gamma).evaluate(p);
}

double delta_move(const Graph& g, const Partition& p, const GlobalCriterion& crit, NodeId node, CommunityId target) {
  return make_quality_model(g, crit).delta_move(p, node, target);
}

double delta_merge(const Graph& g, const Partition& p, const GlobalCriterion& crit, CommunityId a, CommunityId b) {
  return make_quality_model(g, crit).delta_merge(p, a, b);
}

}  // namespace mscd
