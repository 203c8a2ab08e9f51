#include "mscd/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mscd/errors.hpp"

namespace mscd {

namespace {

// Splits `total` into sizes within [lo, hi], never stranding fewer than lo nodes.
// Block sizes drawn uniformly among those that leave a splittable remainder.
// `inner` bounds, when given, require each block to split further into that range.
std::vector<std::size_t> draw_blocks(std::size_t total, std::size_t lo, std::size_t hi, std::mt19937_64& rng,
                                     const char* what, std::size_t inner_lo = 0, std::size_t inner_hi = 0) {
  auto splits = [](std::size_t r, std::size_t a, std::size_t b) { return (r + b - 1) / b <= r / a; };
  auto usable = [&](std::size_t s) { return inner_lo == 0 || splits(s, inner_lo, inner_hi); };
  // reachable[r]: r nodes can be cut into usable blocks
  std::vector<char> reachable(total + 1, 0);
  reachable[0] = 1;
  for (std::size_t r = lo; r <= total; ++r) {
    for (std::size_t s = lo; s <= std::min(hi, r) && !reachable[r]; ++s) reachable[r] = reachable[r - s] && usable(s);
  }
  if (!reachable[total]) {
    throw GenerationError(std::string("cannot split ") + std::to_string(total) + " nodes into " + what +
                          " blocks of size " + std::to_string(lo) + ".." + std::to_string(hi));
  }
  std::vector<std::size_t> sizes, options;
  std::size_t remaining = total;
  while (remaining > 0) {
    options.clear();
    for (std::size_t s = lo; s <= std::min(hi, remaining); ++s) {
      if (usable(s) && reachable[remaining - s]) options.push_back(s);
    }
    const std::size_t size = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    sizes.push_back(size);
    remaining -= size;
  }
  return sizes;
}

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

enum Category { kMicro = 0, kMacro = 1, kOutside = 2 };

class StubMatcher {
 public:
  StubMatcher(const std::vector<std::uint32_t>& micro, const std::vector<std::uint32_t>& macro, std::mt19937_64& rng)
      : micro_(micro), macro_(macro), rng_(rng) {}

  bool allowed(Category cat, NodeId a, NodeId b) const {
    if (a == b || edges_.count(pair_key(a, b))) return false;
    switch (cat) {
      case kMicro: return micro_[a] == micro_[b];
      case kMacro: return macro_[a] == macro_[b] && micro_[a] != micro_[b];
      case kOutside: return macro_[a] != macro_[b];
    }
    return false;
  }

  // Pairs the stubs of one group.
  void match(Category cat, std::vector<NodeId> stubs, std::size_t sweeps, const char* label) {
    std::shuffle(stubs.begin(), stubs.end(), rng_);
    trim_dominant_class(cat, stubs);
    if (stubs.size() % 2) stubs.pop_back();
    const std::size_t pairs = stubs.size() / 2;
    if (pairs == 0) return;
    std::vector<char> ok(pairs, 0);
    std::vector<std::size_t> bad;
    for (std::size_t p = 0; p < pairs; ++p) {
      if (allowed(cat, stubs[2 * p], stubs[2 * p + 1])) {
        edges_.insert(pair_key(stubs[2 * p], stubs[2 * p + 1]));
        ok[p] = 1;
      } else {
        bad.push_back(p);
      }
    }
    std::uniform_int_distribution<std::size_t> any(0, pairs - 1);
    for (std::size_t sweep = 0; sweep < sweeps && !bad.empty(); ++sweep) {
      std::vector<std::size_t> still;
      for (std::size_t p : bad) {
        if (ok[p]) continue;
        if (!rewire(cat, stubs, ok, p, any(rng_))) still.push_back(p);
      }
      bad = std::move(still);
    }
    if (!bad.empty()) {
      throw GenerationError(std::to_string(bad.size()) + " " + label +
                            " stub pairs could not be placed without self-loops, repeats or block violations after " +
                            std::to_string(sweeps) + " rewiring sweeps");
    }
  }

  const std::unordered_set<std::uint64_t>& edges() const { return edges_; }

 private:
  // Stubs must pair across classes (micro blocks for macro edges, macro blocks
  // for inter-macro edges), so no class may hold more than half of them.
  // Surplus stubs of the largest class can never be matched and are dropped.
  void trim_dominant_class(Category cat, std::vector<NodeId>& stubs) const {
    if (cat == kMicro || stubs.empty()) return;
    const auto& cls = cat == kMacro ? micro_ : macro_;
    std::unordered_map<std::uint32_t, std::size_t> count;
    for (NodeId v : stubs) ++count[cls[v]];
    const auto top = std::max_element(count.begin(), count.end(), [](const auto& a, const auto& b) {
      return a.second < b.second || (a.second == b.second && a.first > b.first);
    });
    const std::size_t rest = stubs.size() - top->second;
    if (top->second <= rest) return;
    std::size_t surplus = top->second - rest;
    const std::uint32_t big = top->first;
    std::erase_if(stubs, [&](NodeId v) {
      if (surplus == 0 || cls[v] != big) return false;
      --surplus;
      return true;
    });
  }

  const std::vector<std::uint32_t>& micro_;
  const std::vector<std::uint32_t>& macro_;
  std::mt19937_64& rng_;
  std::unordered_set<std::uint64_t> edges_;

  bool rewire(Category cat, std::vector<NodeId>& stubs, std::vector<char>& ok, std::size_t p, std::size_t q) {
    if (p == q) return false;
    NodeId& a = stubs[2 * p];
    NodeId& b = stubs[2 * p + 1];
    NodeId& c = stubs[2 * q];
    NodeId& d = stubs[2 * q + 1];
    if (ok[q]) edges_.erase(pair_key(c, d));
    for (int variant = 0; variant < 2; ++variant) {
      NodeId& partner = variant == 0 ? c : d;
      NodeId& other = variant == 0 ? d : c;
      // proposed pairs: (a, partner) and (b, other)
      if (!allowed(cat, a, partner)) continue;
      edges_.insert(pair_key(a, partner));
      if (allowed(cat, b, other)) {
        edges_.insert(pair_key(b, other));
        std::swap(b, partner);
        // slot p now holds (a, partner) and slot q holds (b, other) in some order
        ok[p] = 1;
        ok[q] = 1;
        return true;
      }
      edges_.erase(pair_key(a, partner));
    }
    if (ok[q]) edges_.insert(pair_key(c, d));
    return false;
  }
};

void validate(const BenchSpec& s) {
  if (s.n == 0) throw ArgumentError("n must be positive");
  if (s.micro_min == 0 || s.micro_min > s.micro_max) throw ArgumentError("micro size range must satisfy 1 <= min <= max");
  if (s.macro_min > s.macro_max) throw ArgumentError("macro size range must satisfy min <= max");
  if (s.micro_max > s.macro_min) throw ArgumentError("micro max size must not exceed macro min size");
  if (!(s.mu1 >= 0.0) || !(s.mu2 < 1.0) || s.mu1 > s.mu2) throw ArgumentError("need 0 <= mu1 <= mu2 < 1");
  if (s.mu1 == s.mu2 && s.mu1 != 0.0) throw ArgumentError("mu2 must exceed mu1 unless both are 0");
  if (!(s.mean_degree >= 1.0) || !std::isfinite(s.mean_degree)) throw ArgumentError("mean degree must be >= 1");
  if (s.max_degree == 0) throw ArgumentError("max degree must be positive");
}

}  // namespace

Benchmark generate_two_level(const BenchSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);

  const auto lo_deg = static_cast<std::size_t>(std::ceil(spec.mean_degree / 2.0));
  const auto hi_deg = static_cast<std::size_t>(std::floor(1.5 * spec.mean_degree));
  const std::size_t cap = std::min(hi_deg, spec.max_degree);
  if ((1.0 - spec.mu2) * static_cast<double>(cap) > static_cast<double>(spec.micro_min - 1)) {
    throw GenerationError("micro blocks of " + std::to_string(spec.micro_min) + " nodes cannot host an internal degree of " +
                          std::to_string((1.0 - spec.mu2) * static_cast<double>(cap)));
  }
  if (spec.mu1 > 0.0 && spec.n <= spec.macro_max && spec.n < 2 * spec.macro_min) {
    throw GenerationError("mu1 > 0 needs at least two macro blocks");
  }

  std::vector<std::uint32_t> micro(spec.n), macro(spec.n);
  {
    std::uint32_t micro_id = 0;
    NodeId next = 0;
    const auto macro_sizes = draw_blocks(spec.n, spec.macro_min, spec.macro_max, rng, "macro", spec.micro_min, spec.micro_max);
    for (std::uint32_t M = 0; M < macro_sizes.size(); ++M) {
      if (spec.mu2 > spec.mu1 && macro_sizes[M] < 2 * spec.micro_min) {
        throw GenerationError("a macro block of " + std::to_string(macro_sizes[M]) +
                              " nodes holds a single micro block, leaving no room for mu2 - mu1 edges");
      }
      for (std::size_t size : draw_blocks(macro_sizes[M], spec.micro_min, spec.micro_max, rng, "micro")) {
        for (std::size_t k = 0; k < size; ++k, ++next) {
          micro[next] = micro_id;
          macro[next] = M;
        }
        ++micro_id;
      }
    }
    // Shuffle node ids so blocks are not contiguous ranges.
    std::vector<NodeId> perm(spec.n);
    for (NodeId i = 0; i < spec.n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::uint32_t> mi(spec.n), ma(spec.n);
    for (NodeId i = 0; i < spec.n; ++i) {
      mi[perm[i]] = micro[i];
      ma[perm[i]] = macro[i];
    }
    micro = std::move(mi);
    macro = std::move(ma);
  }
  const std::size_t micro_count = *std::max_element(micro.begin(), micro.end()) + 1;
  const std::size_t macro_count = *std::max_element(macro.begin(), macro.end()) + 1;

  std::vector<std::vector<NodeId>> micro_stubs(micro_count), macro_stubs(macro_count);
  std::vector<NodeId> outside_stubs;
  std::uniform_int_distribution<std::size_t> degree(std::max<std::size_t>(1, lo_deg), std::max(lo_deg, hi_deg));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> micro_size(micro_count, 0), macro_size(macro_count, 0);
  for (NodeId i = 0; i < spec.n; ++i) {
    ++micro_size[micro[i]];
    ++macro_size[macro[i]];
  }
  // Stochastic rounding keeps each node's split unbiased while its counts stay integral.
  auto share = [&](double x) {
    const double whole = std::floor(x);
    return static_cast<std::size_t>(whole) + (unit(rng) < x - whole ? 1 : 0);
  };
  for (NodeId i = 0; i < spec.n; ++i) {
    const std::size_t d = std::clamp<std::size_t>(degree(rng), 1, spec.max_degree);
    const std::size_t out = std::min(d, share(spec.mu1 * static_cast<double>(d)));
    std::size_t mid = std::min(d - out, share((spec.mu2 - spec.mu1) * static_cast<double>(d)));
    std::size_t in = d - out - mid;
    const std::size_t in_room = micro_size[micro[i]] - 1;
    if (in > in_room) {
      mid += in - in_room;
      in = in_room;
    }
    mid = std::min(mid, macro_size[macro[i]] - micro_size[micro[i]]);
    outside_stubs.insert(outside_stubs.end(), out, i);
    macro_stubs[macro[i]].insert(macro_stubs[macro[i]].end(), mid, i);
    micro_stubs[micro[i]].insert(micro_stubs[micro[i]].end(), in, i);
  }

  StubMatcher matcher(micro, macro, rng);
  for (auto& stubs : micro_stubs) matcher.match(kMicro, std::move(stubs), spec.rewiring_sweeps, "micro");
  for (auto& stubs : macro_stubs) matcher.match(kMacro, std::move(stubs), spec.rewiring_sweeps, "macro");
  matcher.match(kOutside, std::move(outside_stubs), spec.rewiring_sweeps, "inter-macro");

  std::vector<std::uint64_t> edges(matcher.edges().begin(), matcher.edges().end());
  std::sort(edges.begin(), edges.end());
  GraphBuilder builder;
  for (NodeId i = 0; i < spec.n; ++i) builder.add_node(std::to_string(i));
  for (std::uint64_t e : edges) builder.add_edge(static_cast<NodeId>(e >> 32), static_cast<NodeId>(e & 0xffffffffu));

  return {builder.build(), Partition::from_assignment(micro), Partition::from_assignment(macro)};
}

}  // namespace mscd
