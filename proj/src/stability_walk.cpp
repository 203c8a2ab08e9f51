#include "mscd/stability_walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "mscd/errors.hpp"

namespace mscd {

namespace {

std::vector<std::string> copy_labels(const Graph& g) { return {g.labels().begin(), g.labels().end()}; }

// Upper-triangle part of rows [first, last) of walk_t1 * D^-1 * walk_t2.
void compose_rows(const Graph& t1, const Graph& t2, std::span<const double> d, double tau, NodeId first,
                  NodeId last, std::vector<std::vector<Edge>>& upper) {
  const std::size_t n = t1.node_count();
  std::vector<double> acc(n, 0.0);
  std::vector<char> used(n, 0);
  std::vector<NodeId> touched;
  for (NodeId node = first; node < last; ++node) {
    if (!(d[node] > 0.0)) continue;
    for (const Edge& hop1 : t1.neighbors(node)) {
      const NodeId mid = hop1.target;
      const double v1 = hop1.weight / d[node];
      for (const Edge& hop2 : t2.neighbors(mid)) {
        if (hop2.target < node) continue;
        const double v2 = hop2.weight / d[mid];
        if (!used[hop2.target]) {
          used[hop2.target] = 1;
          touched.push_back(hop2.target);
        }
        acc[hop2.target] += d[node] * v1 * v2;
      }
    }
    std::sort(touched.begin(), touched.end());
    auto& row = upper[node];
    for (NodeId target : touched) {
      const double w = acc[target];
      if (w >= tau && w > 0.0) row.push_back({target, w});
      acc[target] = 0.0;
      used[target] = 0;
    }
    touched.clear();
  }
}

}  // namespace

Graph compose_walk(const Graph& walk_t1, const Graph& walk_t2, std::span<const double> strengths, double tau,
                   unsigned workers) {
  const std::size_t n = walk_t1.node_count();
  if (walk_t2.node_count() != n || strengths.size() != n) {
    throw ContractViolation("compose_walk: inputs span different node sets");
  }
  if (!(tau >= 0.0)) throw DomainError("compose_walk: tau must be >= 0");

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (n < 1024) workers = 1;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n == 0 ? 1 : n));

  std::vector<std::vector<Edge>> upper(n);
  if (workers == 1) {
    compose_rows(walk_t1, walk_t2, strengths, tau, 0, static_cast<NodeId>(n), upper);
  } else {
    // Interleaved blocks: rows near the top of the triangle are the most expensive.
    constexpr NodeId block = 64;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t start = static_cast<std::size_t>(w) * block; start < n;
             start += static_cast<std::size_t>(workers) * block) {
          const auto stop = static_cast<NodeId>(std::min(n, start + block));
          compose_rows(walk_t1, walk_t2, strengths, tau, static_cast<NodeId>(start), stop, upper);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<std::vector<Edge>> rows(n);
  std::vector<std::size_t> lower_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Edge& e : upper[i]) {
      if (e.target != i) ++lower_count[e.target];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rows[i].reserve(lower_count[i] + upper[i].size());
  // Lower part first (ascending source id), then the row's own upper part keeps rows sorted.
  for (std::size_t i = 0; i < n; ++i) {
    for (const Edge& e : upper[i]) {
      if (e.target != i) rows[e.target].push_back({static_cast<NodeId>(i), e.weight});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].insert(rows[i].end(), upper[i].begin(), upper[i].end());
    std::vector<Edge>().swap(upper[i]);
  }
  return Graph::from_rows(std::move(rows), copy_labels(walk_t1));
}

Graph blend_walks(const Graph& x, double a, const Graph& y, double b) {
  const std::size_t n = x.node_count();
  if (y.node_count() != n) throw ContractViolation("blend_walks: inputs span different node sets");
  std::vector<std::vector<Edge>> rows(n);
  for (NodeId i = 0; i < n; ++i) {
    auto rx = x.neighbors(i);
    auto ry = y.neighbors(i);
    auto& row = rows[i];
    row.reserve(rx.size() + ry.size());
    std::size_t p = 0, q = 0;
    while (p < rx.size() || q < ry.size()) {
      if (q == ry.size() || (p < rx.size() && rx[p].target < ry[q].target)) {
        row.push_back({rx[p].target, a * rx[p].weight});
        ++p;
      } else if (p == rx.size() || ry[q].target < rx[p].target) {
        row.push_back({ry[q].target, b * ry[q].weight});
        ++q;
      } else {
        row.push_back({rx[p].target, a * rx[p].weight + b * ry[q].weight});
        ++p;
        ++q;
      }
    }
    std::erase_if(row, [](const Edge& e) { return !(e.weight > 0.0); });
  }
  return Graph::from_rows(std::move(rows), copy_labels(x));
}

Graph zero_step_walk(const Graph& g) {
  std::vector<std::vector<Edge>> rows(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.strength(i) > 0.0) rows[i].push_back({i, g.strength(i)});
  }
  return Graph::from_rows(std::move(rows), copy_labels(g));
}

WalkCache::WalkCache(const Graph& g, double tau, std::size_t retained, unsigned workers)
    : graph_(&g), tau_(tau), retained_(retained), workers_(workers) {
  if (!(tau >= 0.0)) throw DomainError("walk threshold tau must be >= 0");
  zero_ = std::make_shared<const Graph>(zero_step_walk(g));
  // Non-owning handle: the cache never outlives the graph it was built for.
  one_ = WalkNetwork(std::shared_ptr<const Graph>(), &g);
}

bool WalkCache::cached(std::size_t t) const { return t <= 1 || powers_.contains(t); }

void WalkCache::touch(std::size_t t) {
  recency_.remove(t);
  recency_.push_front(t);
  while (recency_.size() > retained_) {
    powers_.erase(recency_.back());
    recency_.pop_back();
  }
}

WalkNetwork WalkCache::power(std::size_t t) {
  if (t == 0) return zero_;
  if (t == 1) return one_;
  if (auto it = powers_.find(t); it != powers_.end()) {
    touch(t);
    return it->second;
  }

  auto largest_cached = [&](std::size_t limit) {
    std::size_t best = 1;
    WalkNetwork net = one_;
    for (const auto& [exp, walk] : powers_) {
      if (exp <= limit && exp > best) {
        best = exp;
        net = walk;
      }
    }
    return std::pair{best, net};
  };

  auto [exponent, result] = largest_cached(t);
  while (exponent < t) {
    const std::size_t remaining = t - exponent;
    auto [step, factor] = largest_cached(remaining);
    if (exponent <= remaining && exponent > step) {
      step = exponent;
      factor = result;
    }
    result = std::make_shared<const Graph>(compose_walk(*result, *factor, graph_->strengths(), tau_, workers_));
    ++compositions_;
    exponent += step;
  }
  powers_[t] = result;
  touch(t);
  return result;
}

WalkNetwork walk_for_time(double t, WalkCache& cache) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("Markov time t must be finite and >= 0");
  const double lower = std::floor(t);
  const double upper = std::ceil(t);
  if (lower == upper) return cache.power(static_cast<std::size_t>(lower));
  auto below = cache.power(static_cast<std::size_t>(lower));
  auto above = cache.power(static_cast<std::size_t>(upper));
  return std::make_shared<const Graph>(blend_walks(*below, upper - t, *above, t - lower));
}

double stability_q(const Graph& g, const Partition& p, double t, WalkCache& cache) {
  return QualityModel::stability(g, walk_for_time(t, cache), t).evaluate(p);
}

QualityModel make_quality_model(const Graph& g, const GlobalCriterion& crit, WalkCache& cache) {
  if (crit.kind != Criterion::SO) return make_quality_model(g, crit);
  if (&cache.graph() != &g) throw ContractViolation("walk cache was built for a different graph");
  return QualityModel::stability(g, walk_for_time(crit.param, cache), crit.param);
}

}  // namespace mscd
