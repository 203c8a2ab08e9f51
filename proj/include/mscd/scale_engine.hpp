#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mscd/criterion.hpp"
#include "mscd/detect_global.hpp"
#include "mscd/detect_local.hpp"
#include "mscd/graph.hpp"

namespace mscd {

/// X values min_value + (A - min_value)(1 - ln i / ln X) for i = 1..X,
/// descending from exactly A to exactly min_value.
std::vector<double> sample_scales(double A, std::size_t X, double min_value = 0.0);

struct ScalePlan {
  Criterion kind = Criterion::RB;
  double A = 1.0;
  std::size_t X = 2;
  /// Lower end of the sample. Unset means 0, or 0.01 * A for lfk and hlslw
  /// whose alpha must stay positive. AFG may go negative down to -min strength.
  std::optional<double> min_value;

  double lower() const noexcept;
  std::vector<double> samples() const;
  /// Indices into samples() in the order the detectors must see them:
  /// ascending t for SO, the sampled (descending) order for everything else.
  std::vector<std::size_t> execution_order() const;
};

struct SweepOptions {
  double tau = kDefaultWalkThreshold;
  double eta = 0.5;
  std::uint64_t seed = 1;
  bool weighted_merge = false;
  Neighbourhood neighbourhood = Neighbourhood::Open;
  bool allow_overlap = true;
  GlobalDetectOptions global;
  std::vector<Cover> ground_truths;
};

struct SweepRecord {
  double param = 0.0;
  Cover communities;
  double quality = 0.0;
  std::size_t community_count = 0;
  std::size_t node_moves = 0;  ///< global criteria only
};

/// Per-scale results in sampled order plus the derived NMI series.
struct SweepReport {
  Criterion kind = Criterion::RB;
  std::vector<SweepRecord> records;
  std::vector<double> nmi_consecutive;
  std::vector<double> nmi_window_3;
  std::vector<double> nmi_window_5;
  std::vector<std::vector<double>> nmi_vs_truth;  ///< one series per ground truth
};

SweepReport sweep(const Graph& g, const ScalePlan& plan, const SweepOptions& options = {});

}  // namespace mscd
