#include "mscd/scale_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mscd/errors.hpp"
#include "mscd/metrics.hpp"

namespace mscd {

std::vector<double> sample_scales(double A, std::size_t X, double min_value) {
  if (X < 2) throw ArgumentError("X must be >= 2, got " + std::to_string(X));
  if (!std::isfinite(A) || !std::isfinite(min_value)) throw ArgumentError("A and min_value must be finite");
  if (!(A > 0.0)) throw ArgumentError("A must be > 0");
  if (!(A > min_value)) throw ArgumentError("A must exceed min_value");
  std::vector<double> out(X);
  const double log_x = std::log(static_cast<double>(X));
  for (std::size_t i = 1; i <= X; ++i) {
    out[i - 1] = min_value + (A - min_value) * (1.0 - std::log(static_cast<double>(i)) / log_x);
  }
  out.front() = A;
  out.back() = min_value;
  return out;
}

double ScalePlan::lower() const noexcept {
  if (min_value) return *min_value;
  return is_local(kind) ? 0.01 * A : 0.0;
}

std::vector<double> ScalePlan::samples() const { return sample_scales(A, X, lower()); }

std::vector<std::size_t> ScalePlan::execution_order() const {
  std::vector<std::size_t> order(X);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (coarsens_with_larger_parameter(kind)) std::reverse(order.begin(), order.end());
  return order;
}

SweepReport sweep(const Graph& g, const ScalePlan& plan, const SweepOptions& options) {
  const std::vector<double> sampled = plan.samples();
  const std::vector<std::size_t> order = plan.execution_order();
  for (const Cover& truth : options.ground_truths) {
    if (truth.node_count() != g.node_count()) throw ArgumentError("ground truth spans a different node set");
  }
  std::vector<double> params;
  params.reserve(order.size());
  for (std::size_t k : order) params.push_back(sampled[k]);

  SweepReport report;
  report.kind = plan.kind;
  report.records.resize(sampled.size());
  if (is_global(plan.kind)) {
    auto results = detect_global(g, plan.kind, params, options.tau, options.seed, options.global);
    for (std::size_t e = 0; e < order.size(); ++e) {
      SweepRecord& r = report.records[order[e]];
      r.param = results[e].param;
      r.quality = results[e].quality;
      r.community_count = results[e].partition.community_count();
      r.node_moves = results[e].stats.node_moves;
      r.communities = Cover::from_partition(results[e].partition);
    }
  } else {
    LocalDetectOptions local;
    local.eta = options.eta;
    local.weighted_merge = options.weighted_merge;
    local.neighbourhood = options.neighbourhood;
    local.allow_overlap = options.allow_overlap;
    auto results = detect_local(g, plan.kind, params, local);
    for (std::size_t e = 0; e < order.size(); ++e) {
      SweepRecord& r = report.records[order[e]];
      r.param = results[e].param;
      r.quality = results[e].quality;
      r.community_count = results[e].cover.community_count();
      r.communities = std::move(results[e].cover);
    }
  }

  std::vector<Cover> sets;
  sets.reserve(report.records.size());
  for (const auto& r : report.records) sets.push_back(r.communities);
  report.nmi_consecutive = consecutive_nmi(sets);
  report.nmi_window_3 = windowed_nmi(std::span<const double>(report.nmi_consecutive), 3);
  report.nmi_window_5 = windowed_nmi(std::span<const double>(report.nmi_consecutive), 5);
  for (const Cover& truth : options.ground_truths) {
    auto& series = report.nmi_vs_truth.emplace_back();
    for (const auto& s : sets) series.push_back(s.community_count() == 0 ? 0.0 : nmi(s, truth));
  }
  return report;
}

}  // namespace mscd
