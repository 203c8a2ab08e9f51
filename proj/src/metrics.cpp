#include "mscd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "mscd/errors.hpp"

namespace mscd {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

double entropy(std::span<const std::size_t> sizes, double n) {
  double h = 0.0;
  for (std::size_t s : sizes) h += plogp(static_cast<double>(s) / n);
  return h;
}

void require_same_nodes(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ArgumentError("compared structures span different node sets (" + std::to_string(a) + " vs " +
                        std::to_string(b) + " nodes)");
  }
}

// Overlap counts between every community of a and every community of b that share a node.
std::unordered_map<std::uint64_t, std::size_t> overlaps(const Cover& a, const Cover& b) {
  std::unordered_map<std::uint64_t, std::size_t> shared;
  for (std::size_t k = 0; k < a.community_count(); ++k) {
    for (NodeId v : a.community(k)) {
      for (std::uint32_t l : b.memberships(v)) ++shared[(static_cast<std::uint64_t>(k) << 32) | l];
    }
  }
  return shared;
}

// Normalised H(X|Y) averaged over the communities X_k of x.
double conditional(const Cover& x, const Cover& y, const std::unordered_map<std::uint64_t, std::size_t>& shared,
                   bool x_is_row) {
  const double n = static_cast<double>(x.node_count());
  double sum = 0.0;
  for (std::size_t k = 0; k < x.community_count(); ++k) {
    const double px = static_cast<double>(x.community(k).size()) / n;
    const double hx = plogp(px) + plogp(1.0 - px);
    if (hx <= 0.0) continue;
    double best = hx;
    for (std::size_t l = 0; l < y.community_count(); ++l) {
      const std::uint64_t key = x_is_row ? (static_cast<std::uint64_t>(k) << 32) | l
                                         : (static_cast<std::uint64_t>(l) << 32) | k;
      const auto it = shared.find(key);
      const double c = it == shared.end() ? 0.0 : static_cast<double>(it->second);
      const double a = static_cast<double>(x.community(k).size());
      const double b = static_cast<double>(y.community(l).size());
      const double h11 = plogp(c / n);
      const double h10 = plogp((a - c) / n);
      const double h01 = plogp((b - c) / n);
      const double h00 = plogp((n - a - b + c) / n);
      if (!(h11 + h00 > h01 + h10)) continue;
      const double py = b / n;
      const double hy = plogp(py) + plogp(1.0 - py);
      best = std::min(best, h11 + h10 + h01 + h00 - hy);
    }
    sum += best / hx;
  }
  return sum / static_cast<double>(x.community_count());
}

}  // namespace

ContingencyTable contingency(const Partition& a, const Partition& b) {
  require_same_nodes(a.node_count(), b.node_count());
  ContingencyTable t;
  t.n = a.node_count();
  t.row_sums.resize(a.community_count());
  t.col_sums.resize(b.community_count());
  for (std::size_t k = 0; k < a.community_count(); ++k) t.row_sums[k] = a.members(k).size();
  for (std::size_t l = 0; l < b.community_count(); ++l) t.col_sums[l] = b.members(l).size();

  std::vector<std::size_t> row_count(b.community_count(), 0);
  std::vector<std::uint32_t> used;
  for (std::uint32_t k = 0; k < a.community_count(); ++k) {
    for (NodeId v : a.members(k)) {
      const CommunityId l = b.community_of(v);
      if (row_count[l]++ == 0) used.push_back(l);
    }
    std::sort(used.begin(), used.end());
    for (std::uint32_t l : used) {
      t.cells.push_back({k, l, row_count[l]});
      row_count[l] = 0;
    }
    used.clear();
  }
  return t;
}

double nmi_crisp(const Partition& a, const Partition& b) {
  const ContingencyTable t = contingency(a, b);
  if (t.n == 0) return 1.0;
  const double n = static_cast<double>(t.n);
  const double ha = entropy(t.row_sums, n);
  const double hb = entropy(t.col_sums, n);
  if (ha + hb <= 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& cell : t.cells) {
    const double joint = static_cast<double>(cell.count) / n;
    const double pa = static_cast<double>(t.row_sums[cell.row]) / n;
    const double pb = static_cast<double>(t.col_sums[cell.col]) / n;
    mi += joint * std::log(joint / (pa * pb));
  }
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

double nmi_overlapping(const Cover& a, const Cover& b) {
  require_same_nodes(a.node_count(), b.node_count());
  if (a.community_count() == 0 || b.community_count() == 0) {
    throw ArgumentError("overlapping NMI needs non-empty covers");
  }
  const auto shared = overlaps(a, b);
  const double value = 1.0 - 0.5 * (conditional(a, b, shared, true) + conditional(b, a, shared, false));
  return std::clamp(value, 0.0, 1.0);
}

double nmi(const Cover& a, const Cover& b) {
  require_same_nodes(a.node_count(), b.node_count());
  if (a.is_partition() && b.is_partition()) {
    return nmi_crisp(Partition::from_communities(a.node_count(), a.communities()),
                     Partition::from_communities(b.node_count(), b.communities()));
  }
  return nmi_overlapping(a, b);
}

std::vector<double> consecutive_nmi(std::span<const Cover> sets) {
  std::vector<double> out;
  out.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) out.push_back(i == 0 ? 1.0 : nmi(sets[i - 1], sets[i]));
  return out;
}

std::vector<double> windowed_nmi(std::span<const double> consecutive, std::size_t p) {
  if (p < 2) throw ArgumentError("window p must be >= 2");
  std::vector<double> out(consecutive.size());
  for (std::size_t i = 0; i < consecutive.size(); ++i) {
    // pairs (j-1, j) with both sets inside [i-p+1, i]
    const std::size_t first = i + 2 >= p ? std::max<std::size_t>(1, i + 2 - p) : 1;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = first; j <= i; ++j) {
      sum += consecutive[j];
      ++count;
    }
    out[i] = count == 0 ? 1.0 : sum / static_cast<double>(count);
  }
  return out;
}

std::vector<double> windowed_nmi(std::span<const Cover> sets, std::size_t p) {
  if (sets.empty()) throw ArgumentError("windowed NMI needs at least one set");
  const auto consecutive = consecutive_nmi(sets);
  return windowed_nmi(std::span<const double>(consecutive), p);
}

}  // namespace mscd
