#pragma once

#include <cstddef>
#include <list>
#include <map>
#include <memory>
#include <span>

#include "mscd/criteria_global.hpp"
#include "mscd/graph.hpp"

namespace mscd {

using WalkNetwork = std::shared_ptr<const Graph>;

/// Edge threshold used for walks longer than one step unless overridden.
inline constexpr double kDefaultWalkThreshold = 0.001;

/// A_{t1+t2} from A_{t1} and A_{t2} by adjacency-list composition:
///
///   A(n, n2) += d(n) * (A_{t1}(n, n1) / d(n)) * (A_{t2}(n1, n2) / d(n1))
///
/// summed over every two-hop path, then entries below tau are dropped.
/// `strengths` are the original node strengths d. Only the upper triangle is
/// accumulated and mirrored, so the result is exactly symmetric. Rows are
/// split across `workers` threads (0 picks a count from the hardware).
Graph compose_walk(const Graph& walk_t1, const Graph& walk_t2, std::span<const double> strengths, double tau,
                   unsigned workers = 1);

/// Entrywise a * x + b * y.
Graph blend_walks(const Graph& x, double a, const Graph& y, double b);

/// A_0 = diag(d): a walk of length zero stays put.
Graph zero_step_walk(const Graph& g);

/// Memoised integer walk powers of one graph.
///
/// A_0 and A_1 are always held; other powers are evicted least recently used
/// beyond `retained` entries. Missing powers are built by repeatedly composing
/// with the largest cached power that still fits.
class WalkCache {
 public:
  explicit WalkCache(const Graph& g, double tau = kDefaultWalkThreshold, std::size_t retained = 2,
                     unsigned workers = 0);

  const Graph& graph() const noexcept { return *graph_; }
  double tau() const noexcept { return tau_; }

  /// A_t for integer t >= 0.
  WalkNetwork power(std::size_t t);
  bool cached(std::size_t t) const;
  /// Number of compose_walk calls made so far.
  std::size_t compositions() const noexcept { return compositions_; }

 private:
  const Graph* graph_;
  double tau_;
  std::size_t retained_;
  unsigned workers_;
  WalkNetwork zero_;
  WalkNetwork one_;
  std::map<std::size_t, WalkNetwork> powers_;
  std::list<std::size_t> recency_;
  std::size_t compositions_ = 0;

  void touch(std::size_t t);
};

/// Walk network at any t >= 0; fractional t interpolates linearly between the
/// neighbouring integer powers.
WalkNetwork walk_for_time(double t, WalkCache& cache);

/// Stability of p at Markov time t: modularity form on A_t with the original null model.
double stability_q(const Graph& g, const Partition& p, double t, WalkCache& cache);

/// Any global criterion, stability included.
QualityModel make_quality_model(const Graph& g, const GlobalCriterion& crit, WalkCache& cache);

}  // namespace mscd
