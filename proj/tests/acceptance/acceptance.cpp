// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any failure.
// Optional arguments restrict the run to the listed criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mscd/benchgen.hpp"
#include "mscd/criteria_global.hpp"
#include "mscd/detect_global.hpp"
#include "mscd/detect_local.hpp"
#include "mscd/metrics.hpp"
#include "mscd/scale_engine.hpp"
#include "mscd/stability_walk.hpp"
#include "oracles.hpp"

using namespace mscd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("AC%-2d %s  %s | %s\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Every global detection result seen during the run, for the connectivity audit.
struct ConnectivityAudit {
  std::size_t communities = 0;
  std::size_t disconnected = 0;
  std::size_t runs = 0;

  void check(const Graph& g, const Cover& c) {
    ++runs;
    for (const auto& members : c.communities()) {
      ++communities;
      if (!community_connected(g, members)) ++disconnected;
    }
  }
  void check(const Graph& g, const Partition& p) { check(g, Cover::from_partition(p)); }
} audit;

Benchmark desk_benchmark() {
  BenchSpec spec;  // n 1000, micro 20-40, macro 100-250, mean degree 10, mu1 0.1, mu2 0.2
  spec.seed = 2024;
  return generate_two_level(spec);
}

// 1: criterion identities against plain modularity.
void criterion_identities() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 59;
    const Graph g = oracle::random_graph(n, 0.05 + 0.3 * std::uniform_real_distribution<>(0, 1)(rng), trial % 2 == 1,
                                         trial % 3 == 0, rng);
    const Partition p = oracle::random_partition(n, 1 + rng() % 8, rng);
    const double reference = oracle::modularity(g, p);
    WalkCache cache(g, 0.0);
    for (double v : {q_rb(g, p, 1.0), q_afg(g, p, 0.0), stability_q(g, p, 1.0, cache), modularity(g, p)}) {
      worst = std::max(worst, std::abs(v - reference));
    }
  }
  const double elapsed = seconds_since(start);
  report(1, worst <= 1e-12 && elapsed < 5.0, "criterion identities",
         fmt("max |dQ| %.3g (tol 1e-12)", worst) + fmt(", %.2f s (< 5 s)", elapsed));
}

// 2: incremental gains against from-scratch differences.
void gain_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(202);
  double worst = 0.0;
  std::size_t moves = 0, merges = 0;
  const Criterion kinds[] = {Criterion::RB, Criterion::AFG, Criterion::RN, Criterion::SO};
  for (Criterion kind : kinds) {
    std::size_t kind_moves = 0, kind_merges = 0;
    while (kind_moves < 1000 || kind_merges < 1000) {
      const std::size_t n = 3 + rng() % 20;
      const Graph g = oracle::random_graph(n, 0.3, rng() % 2 == 1, rng() % 3 == 0, rng);
      double param = std::uniform_real_distribution<>(0.1, 3.0)(rng);
      std::function<double(const Partition&)> scratch;
      switch (kind) {
        case Criterion::RB: scratch = [&](const Partition& p) { return oracle::rb(g, p, param); }; break;
        case Criterion::RN: scratch = [&](const Partition& p) { return oracle::rn(g, p, param); }; break;
        case Criterion::AFG: {
          double min_strength = g.strength(0);
          for (NodeId i = 0; i < n; ++i) min_strength = std::min(min_strength, g.strength(i));
          param = std::uniform_real_distribution<>(-0.9 * min_strength, 3.0)(rng);
          scratch = [&](const Partition& p) { return oracle::afg(g, p, param); };
          break;
        }
        default: {
          param = static_cast<double>(1 + rng() % 4);
          scratch = [&](const Partition& p) { return oracle::stability(g, p, static_cast<std::size_t>(param)); };
        }
      }
      WalkCache cache(g, 0.0);
      const QualityModel model = make_quality_model(g, {kind, param}, cache);
      for (int k = 0; k < 20; ++k) {
        const Partition p = oracle::random_partition(n, 1 + rng() % 5, rng);
        const double before = scratch(p);
        if (kind_moves < 1000) {
          const NodeId i = static_cast<NodeId>(rng() % n);
          CommunityId target = static_cast<CommunityId>(rng() % p.community_count());
          if (target >= p.community_of(i)) ++target;  // never the node's own community; count() is a fresh one
          const double expected = scratch(oracle::moved(p, i, target)) - before;
          worst = std::max(worst, std::abs(model.delta_move(p, i, target) - expected));
          ++kind_moves;
        }
        if (kind_merges < 1000 && p.community_count() >= 2) {
          const CommunityId a = static_cast<CommunityId>(rng() % p.community_count());
          CommunityId b = static_cast<CommunityId>(rng() % (p.community_count() - 1));
          if (b >= a) ++b;
          const double expected = scratch(oracle::merged(p, a, b)) - before;
          worst = std::max(worst, std::abs(model.delta_merge(p, a, b) - expected));
          ++kind_merges;
        }
      }
    }
    moves += kind_moves;
    merges += kind_merges;
  }
  const double elapsed = seconds_since(start);
  report(2, worst <= 1e-9 && elapsed < 30.0, "gain oracle equivalence",
         std::to_string(moves) + " moves, " + std::to_string(merges) + " merges over rb/afg/rn/so" +
             fmt(", max err %.3g (tol 1e-9)", worst) + fmt(", %.2f s (< 30 s)", elapsed));
}

// 3: walk composition against dense matrix powers, K3 exact values, interpolation.
void walk_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(303);
  double worst = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    const Graph g = oracle::random_graph(n, 0.15, trial % 2 == 0, trial % 4 == 0, rng);
    WalkCache cache(g, 0.0);
    for (std::size_t t = 1; t <= 5; ++t) {
      const oracle::Matrix expected = oracle::walk_power(g, t);
      const WalkNetwork walk = cache.power(t);
      const Graph& got = *walk;
      for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) worst = std::max(worst, std::abs(got.weight(i, j) - expected[i][j]));
      }
    }
  }
  const Graph k3 = oracle::k3();
  WalkCache k3_cache(k3, 0.0);
  const WalkNetwork k3_walk = k3_cache.power(2);
  const Graph& a2 = *k3_walk;
  bool k3_exact = true;
  for (NodeId i = 0; i < 3; ++i) {
    for (NodeId j = 0; j < 3; ++j) k3_exact = k3_exact && a2.weight(i, j) == (i == j ? 1.0 : 0.5);
  }
  double blend_err = 0.0;
  {
    const Graph g = oracle::random_graph(30, 0.2, true, false, rng);
    WalkCache cache(g, 0.0);
    const WalkNetwork half_walk = walk_for_time(1.5, cache), one_walk = cache.power(1), two_walk = cache.power(2);
    const Graph &half = *half_walk, &one = *one_walk, &two = *two_walk;
    for (NodeId i = 0; i < 30; ++i) {
      for (NodeId j = 0; j < 30; ++j) {
        blend_err = std::max(blend_err, std::abs(half.weight(i, j) - (one.weight(i, j) + two.weight(i, j)) / 2.0));
      }
    }
  }
  const double elapsed = seconds_since(start);
  report(3, worst <= 1e-9 && k3_exact && blend_err <= 1e-12 && elapsed < 10.0, "walk oracle",
         fmt("max err %.3g (tol 1e-9)", worst) + ", K3 t=2 " + (k3_exact ? "exact" : "WRONG") +
             fmt(", t=1.5 mean err %.3g", blend_err) + fmt(", %.2f s (< 10 s)", elapsed));
}

// 4: exact optimum on the two bridged triangles.
void small_graph_optimum() {
  const Graph g = oracle::g7();
  Partition best;
  const double exhaustive = oracle::best_connected(g, [&](const Partition& p) { return oracle::rb(g, p, 1.0); }, &best);
  double unrestricted = -1.0;
  oracle::for_each_partition(g.node_count(), [&](const Partition& p) {
    unrestricted = std::max(unrestricted, oracle::rb(g, p, 1.0));
  });
  bool ok = std::abs(exhaustive - 5.0 / 14.0) <= 1e-12 && std::abs(unrestricted - 5.0 / 14.0) <= 1e-12;
  const double one[] = {1.0};
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = detect_global(g, Criterion::RB, one, 0.0, seed);
    audit.check(g, r[0].partition);
    worst = std::max(worst, std::abs(r[0].quality - 5.0 / 14.0));
    ok = ok && r[0].partition.community_count() == 2 && oracle::same_community(r[0].partition, 0, 1) &&
         oracle::same_community(r[0].partition, 0, 2) && oracle::same_community(r[0].partition, 3, 4) &&
         oracle::same_community(r[0].partition, 3, 5) && !oracle::same_community(r[0].partition, 0, 3);
  }
  report(4, ok && worst <= 1e-12, "exact optimum on G7",
         fmt("exhaustive Q %.17g", exhaustive) + fmt(", worst |Q - 5/14| over 20 seeds %.3g (tol 1e-12)", worst));
}

struct RecoveryCase {
  Criterion kind;
  double A;
  double need_micro;
  double need_macro;  // < 0: not required
};

std::vector<SweepReport> recovery_reports;

// 6: two-level recovery on the desk-scale benchmark.
void two_level_recovery() {
  const Benchmark b = desk_benchmark();
  const RecoveryCase cases[] = {
      {Criterion::RB, 50.0, 0.90, 0.90},  {Criterion::AFG, 50.0, 0.90, 0.90}, {Criterion::SO, 5.0, 0.90, 0.90},
      {Criterion::RN, 1.0, 0.80, -1.0},   {Criterion::LFK, 2.0, 0.80, -1.0},  {Criterion::HLSLW, 2.0, 0.80, -1.0},
  };
  for (const RecoveryCase& c : cases) {
    SweepOptions options;
    options.tau = 0.001;
    options.seed = 11;
    options.ground_truths = {Cover::from_partition(b.micro), Cover::from_partition(b.macro)};
    std::optional<double> lower;
    if (c.kind == Criterion::AFG) {
      // Deepest admissible r: just above minus the smallest strength.
      double min_strength = b.graph.strength(0);
      for (NodeId i = 0; i < b.graph.node_count(); ++i) min_strength = std::min(min_strength, b.graph.strength(i));
      lower = -0.99 * min_strength;
    }
    const auto start = Clock::now();
    SweepReport rep = sweep(b.graph, {c.kind, c.A, 50, lower}, options);
    const double elapsed = seconds_since(start);
    const auto& micro = rep.nmi_vs_truth[0];
    const auto& macro = rep.nmi_vs_truth[1];
    const auto best_micro = std::max_element(micro.begin(), micro.end()) - micro.begin();
    const auto best_macro = std::max_element(macro.begin(), macro.end()) - macro.begin();
    const bool ok = micro[best_micro] >= c.need_micro && (c.need_macro < 0 || macro[best_macro] >= c.need_macro) &&
                    elapsed < 120.0;
    std::ostringstream detail;
    detail << "A=" << c.A << " X=50";
    if (lower) detail << " min " << *lower;
    detail << ": best NMI micro " << fmt("%.4f", micro[best_micro]) << " at "
           << rep.records[best_micro].param << " (need " << c.need_micro << "), macro "
           << fmt("%.4f", macro[best_macro]) << " at " << rep.records[best_macro].param;
    if (c.need_macro >= 0) detail << " (need " << c.need_macro << ")";
    detail << fmt(", %.1f s (< 120 s)", elapsed);
    report(6, ok, std::string("two-level recovery ") + std::string(to_string(c.kind)), detail.str());
    if (is_global(c.kind)) {
      for (const auto& r : rep.records) audit.check(b.graph, r.communities);
    }
    recovery_reports.push_back(std::move(rep));
  }
}

// 7: sweep time grows roughly linearly with the edge count.
void scaling_trend() {
  double times[2];
  std::size_t edges[2];
  for (int k = 0; k < 2; ++k) {
    BenchSpec spec;
    spec.n = k == 0 ? 20000 : 40000;
    spec.micro_min = 50;
    spec.micro_max = 100;
    spec.macro_min = 500;
    spec.macro_max = 1000;
    spec.seed = 7;
    const Benchmark b = generate_two_level(spec);
    edges[k] = b.graph.edge_count();
    SweepOptions options;
    options.seed = 3;
    const auto start = Clock::now();
    const SweepReport rep = sweep(b.graph, {Criterion::RB, 100.0, 20, std::nullopt}, options);
    times[k] = seconds_since(start);
    for (const auto& r : rep.records) audit.check(b.graph, r.communities);
  }
  const double ratio = times[1] / times[0];
  std::ostringstream detail;
  detail << "m=" << edges[0] << fmt(": %.2f s, ", times[0]) << "m=" << edges[1] << fmt(": %.2f s, ", times[1])
         << fmt("ratio %.2f (<= 3)", ratio);
  report(7, ratio <= 3.0, "scaling trend", detail.str());
}

// 8: NMI fixed points.
void nmi_fixed_points() {
  std::mt19937_64 rng(808);
  bool identical = true, opposite = true, overlapping = true;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 100;
    const Partition p = oracle::random_partition(n, 1 + rng() % 10, rng);
    identical = identical && std::abs(nmi_crisp(p, p) - 1.0) <= 1e-12;
    opposite = opposite && std::abs(nmi_crisp(Partition::whole(n), Partition::singletons(n))) <= 1e-12;
    std::vector<std::vector<NodeId>> lists(1 + rng() % 6);
    for (NodeId i = 0; i < n; ++i) {
      for (auto& l : lists) {
        if (rng() % 3 == 0) l.push_back(i);
      }
      lists[rng() % lists.size()].push_back(i);
    }
    for (auto& l : lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    std::erase_if(lists, [](const auto& l) { return l.empty(); });
    const Cover c(n, lists);
    overlapping = overlapping && std::abs(nmi_overlapping(c, c) - 1.0) <= 1e-12;
  }
  const double four = nmi_crisp(Partition::from_assignment(std::vector<std::uint32_t>{0, 0, 1, 1}),
                                Partition::from_assignment(std::vector<std::uint32_t>{0, 0, 0, 1}));
  report(8, identical && opposite && overlapping && std::abs(four - 0.3437) <= 1e-3, "NMI fixed points",
         std::string("identical ") + (identical ? "1" : "WRONG") + ", whole vs singletons " +
             (opposite ? "0" : "WRONG") + ", cover with itself " + (overlapping ? "1" : "WRONG") +
             fmt(", 4-node example %.6f (0.3437 +- 1e-3)", four));
}

// 9: overlapping communities and the merge boundary.
void overlap_behaviour() {
  const Graph g = oracle::two_k4_shared();
  const double one[] = {1.0};
  const auto r = detect_local(g, Criterion::LFK, one, {.eta = 0.5});
  const Cover expected(7, {{0, 1, 2, 3}, {3, 4, 5, 6}});
  const bool two = r[0].cover == expected && r[0].cover.memberships(3).size() == 2;

  // |C1 & C2| / |C1| = 2 / 4 sits exactly on eta = 0.5.
  const Graph chain = oracle::parse("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n2 4\n2 5\n3 4\n3 5\n4 5\n");
  const Cover boundary(6, {{0, 1, 2, 3}, {2, 3, 4, 5}});
  const bool merged_at = merge_overlapping(boundary, 0.5, false, chain).community_count() == 1;
  const bool kept_above = merge_overlapping(boundary, std::nextafter(0.5, 1.0), false, chain).community_count() == 2;
  report(9, two && merged_at && kept_above, "overlap behaviour",
         std::string("two K4s sharing a node: ") + (two ? "2 communities sharing it" : "WRONG") +
             ", ratio 0.5 with eta 0.5 " + (merged_at ? "merges" : "does not merge") + ", with eta just above " +
             (kept_above ? "stays apart" : "merges"));
}

// 10: warm starts need fewer node moves than cold starts.
void warm_start_benefit() {
  const Benchmark b = desk_benchmark();
  SweepOptions options;
  options.seed = 5;
  const ScalePlan plan{Criterion::RB, 50.0, 20, std::nullopt};
  const SweepReport rep = sweep(b.graph, plan, options);
  std::size_t worse = 0, warm_total = 0, cold_total = 0;
  const auto order = plan.execution_order();
  for (std::size_t k = 1; k < order.size(); ++k) {
    const SweepRecord& rec = rep.records[order[k]];
    const auto cold = optimize_at_scale(b.graph, {Criterion::RB, rec.param}, Partition::singletons(b.graph.node_count()),
                                        scale_seed(options.seed, k));
    audit.check(b.graph, cold.partition);
    warm_total += rec.node_moves;
    cold_total += cold.stats.node_moves;
    if (!(rec.node_moves < cold.stats.node_moves)) ++worse;
  }
  for (const auto& r : rep.records) audit.check(b.graph, r.communities);
  report(10, worse == 0, "warm-start benefit",
         std::to_string(order.size() - 1) + " later scales, warm not lower at " + std::to_string(worse) +
             ", total moves warm " + std::to_string(warm_total) + " vs cold " + std::to_string(cold_total));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  auto want = [&](int id) { return only.empty() || only.count(id) > 0; };

  try {
    if (want(1)) criterion_identities();
    if (want(2)) gain_oracle();
    if (want(3)) walk_oracle();
    if (want(4)) small_graph_optimum();
    if (want(6)) two_level_recovery();
    if (want(7)) scaling_trend();
    if (want(8)) nmi_fixed_points();
    if (want(9)) overlap_behaviour();
    if (want(10)) warm_start_benefit();
    if (want(5)) {
      report(5, audit.runs > 0 && audit.disconnected == 0, "connectivity audit",
             std::to_string(audit.communities) + " communities from " + std::to_string(audit.runs) +
                 " global detections, " + std::to_string(audit.disconnected) + " disconnected");
    }
  } catch (const std::exception& e) {
    std::printf("FAIL  aborted: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
