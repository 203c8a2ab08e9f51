#include <gtest/gtest.h>

#include <random>

#include "mscd/benchgen.hpp"
#include "mscd/detect_local.hpp"
#include "mscd/errors.hpp"
#include "oracles.hpp"

using namespace mscd;

namespace {

std::vector<NodeId> range(NodeId first, NodeId last) {
  std::vector<NodeId> out;
  for (NodeId v = first; v <= last; ++v) out.push_back(v);
  return out;
}

// Graph ids follow first appearance in the edge list, which equals the numeric labels here.
Graph two_disjoint_k4() { return oracle::parse("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n4 5\n4 6\n4 7\n5 6\n5 7\n6 7\n"); }

bool satisfies_merge_rule(std::span<const NodeId> a, std::span<const NodeId> b, double eta) {
  std::vector<NodeId> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  const double s = static_cast<double>(shared.size());
  return s / static_cast<double>(a.size()) >= eta || s / static_cast<double>(b.size()) >= eta;
}

void expect_valid_cover(const Cover& c) {
  for (std::size_t k = 0; k < c.community_count(); ++k) {
    const auto members = c.community(k);
    ASSERT_FALSE(members.empty());
    for (std::size_t i = 1; i < members.size(); ++i) ASSERT_LT(members[i - 1], members[i]);
    for (NodeId v : members) {
      const auto m = c.memberships(v);
      ASSERT_NE(std::find(m.begin(), m.end(), k), m.end());
    }
  }
}

}  // namespace

TEST(GrowCommunity, SharedNodeK4GrowsToItsClique) {
  const Graph g = oracle::two_k4_shared();
  const NodeId seed[] = {0};
  const auto r = grow_community(g, seed, Criterion::LFK, 1.0);
  EXPECT_EQ(r.members, range(0, 3));
  const NodeId other[] = {6};
  EXPECT_EQ(grow_community(g, other, Criterion::LFK, 1.0).members, range(3, 6));
}

TEST(GrowCommunity, LocalOptimumIsReturnedUnchanged) {
  const Graph g = oracle::two_k4_shared();
  const auto k4 = range(0, 3);
  const auto r = grow_community(g, k4, Criterion::LFK, 1.0);
  EXPECT_EQ(r.members, k4);
  EXPECT_FALSE(r.changed);
  EXPECT_EQ(r.stats.added, 0u);
}

TEST(GrowCommunity, EmptyCommunityAndBadAlpha) {
  const Graph g = oracle::g7();
  EXPECT_THROW(grow_community(g, {}, Criterion::LFK, 1.0), ContractViolation);
  const NodeId seed[] = {0};
  EXPECT_THROW(grow_community(g, seed, Criterion::LFK, 0.0), DomainError);
  EXPECT_THROW(grow_community(g, seed, Criterion::RB, 1.0), ArgumentError);
}

TEST(GrowCommunity, SingleCleanupPassSufficesWhenCleanupConverges) {
  std::mt19937_64 rng(61);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Graph g = oracle::random_graph(25, 0.15, trial % 2 == 0, false, rng);
    const NodeId seed[] = {static_cast<NodeId>(rng() % 25)};
    const double alpha = 0.6 + 0.1 * (trial % 10);
    const auto full = grow_community(g, seed, Criterion::LFK, alpha);
    const auto one = grow_community(g, seed, Criterion::LFK, alpha, 1);
    EXPECT_LE(one.stats.cleanup_passes, 1u);
    if (full.stats.cleanup_passes <= 2) {
      EXPECT_EQ(one.members, full.members);
      ++compared;
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(GrowCommunity, NoMemberWantsToLeaveAfterCleanup) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = oracle::random_graph(30, 0.12, trial % 2 == 0, false, rng);
    const NodeId seed[] = {static_cast<NodeId>(rng() % 30)};
    const double alpha = 0.7 + 0.05 * (trial % 12);
    const auto r = grow_community(g, seed, Criterion::LFK, alpha);
    if (r.members.size() < 2 || r.stats.added == 0) continue;
    for (NodeId v : r.members) {
      // retention value f(c) - f(c - v)
      EXPECT_GE(lfk_node_gain(g, r.members, v, alpha), -1e-12 * lfk_fitness(ledger_of(g, r.members), alpha));
    }
  }
}

TEST(GrowCommunity, GrowthNeverLowersFitness) {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = oracle::random_graph(30, 0.12, false, false, rng);
    const Partition p = oracle::random_partition(30, 6, rng);
    const auto& start = p.members(0);
    const double alpha = 0.8 + 0.05 * (trial % 8);
    const auto r = grow_community(g, start, Criterion::LFK, alpha);
    EXPECT_GE(lfk_fitness(ledger_of(g, r.members), alpha) + 1e-12, lfk_fitness(ledger_of(g, start), alpha));
  }
}

TEST(Encompasses, Examples) {
  const NodeId a[] = {1, 2, 3}, b[] = {1, 2}, c[] = {3, 4};
  EXPECT_TRUE(encompasses(a, b));
  EXPECT_FALSE(encompasses(a, c));
  EXPECT_TRUE(encompasses(a, a));
  EXPECT_FALSE(encompasses(b, a));
  EXPECT_TRUE(encompasses(a, {}));
}

TEST(MergeOverlapping, DisjointCoverIsUnchanged) {
  const Graph g = two_disjoint_k4();
  const Cover c(8, {range(0, 3), range(4, 7)});
  EXPECT_EQ(merge_overlapping(c, 0.5, false, g), c);
}

TEST(MergeOverlapping, HalfOverlapMergesAtTheBoundary) {
  const Graph g = two_disjoint_k4();
  const Cover c(8, {range(0, 3), range(2, 5)});
  const Cover merged = merge_overlapping(c, 0.5, false, g);
  ASSERT_EQ(merged.community_count(), 1u);
  EXPECT_EQ(merged.community(0).size(), 6u);
  EXPECT_EQ(merge_overlapping(c, 0.51, false, g), c);
}

TEST(MergeOverlapping, SingleSharedNodeOfFourStaysOverlapping) {
  const Graph g = oracle::two_k4_shared();
  const Cover c(7, {range(0, 3), range(3, 6)});
  EXPECT_EQ(merge_overlapping(c, 0.5, false, g), c);
  EXPECT_EQ(merge_overlapping(c, 0.25, false, g).community_count(), 1u);
}

TEST(MergeOverlapping, MergedCommunityIsRechecked) {
  std::mt19937_64 rng(66);
  const Graph g = oracle::random_graph(12, 0.3, false, false, rng);
  // {0..3} and {2..5} merge into {0..5}, which then swallows {4..7}; {9,10,11} stays
  const Cover c(12, {range(0, 3), range(2, 5), range(4, 7), range(9, 11)});
  const Cover merged = merge_overlapping(c, 0.5, false, g);
  ASSERT_EQ(merged.community_count(), 2u);
  EXPECT_EQ(std::vector<NodeId>(merged.community(0).begin(), merged.community(0).end()), range(0, 7));
}

TEST(MergeOverlapping, WeightedRuleUsesInternalWeight) {
  // Dense block {0,1,2,3} plus sparse tail; overlap {2,3} carries one edge.
  const Graph g = oracle::parse("0 1\n0 2\n0 3\n1 2\n1 3\n2 3 0.1\n3 4\n4 5\n");
  const Cover c(6, {range(0, 3), range(2, 5)});
  // cardinality: 2/4 >= 0.5 merges; weights: overlap 0.2 vs 10.2 and 4.2 does not
  EXPECT_EQ(merge_overlapping(c, 0.5, false, g).community_count(), 1u);
  EXPECT_EQ(merge_overlapping(c, 0.5, true, g), c);
}

TEST(MergeOverlapping, EtaRange) {
  const Graph g = oracle::g7();
  const Cover c(6, {{0, 1}});
  EXPECT_THROW(merge_overlapping(c, 0.0, false, g), ArgumentError);
  EXPECT_THROW(merge_overlapping(c, 1.5, false, g), ArgumentError);
  EXPECT_NO_THROW(merge_overlapping(c, 1.0, false, g));
}

TEST(MergeOverlapping, NoQualifyingPairRemains) {
  std::mt19937_64 rng(64);
  const Graph g = oracle::random_graph(30, 0.1, false, false, rng);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<NodeId>> lists;
    const std::size_t k = 2 + rng() % 10;
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<NodeId> members;
      const std::size_t size = 1 + rng() % 8;
      for (std::size_t s = 0; s < size; ++s) members.push_back(static_cast<NodeId>(rng() % 30));
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      lists.push_back(members);
    }
    const double eta = 0.3 + 0.1 * static_cast<double>(trial % 6);
    const Cover merged = merge_overlapping(Cover(30, lists), eta, false, g);
    expect_valid_cover(merged);
    for (std::size_t a = 0; a < merged.community_count(); ++a) {
      for (std::size_t b = a + 1; b < merged.community_count(); ++b) {
        EXPECT_FALSE(satisfies_merge_rule(merged.community(a), merged.community(b), eta));
      }
    }
  }
}

TEST(DetectLocal, TwoDisjointCliques) {
  const Graph g = two_disjoint_k4();
  const double one[] = {1.0};
  const auto r = detect_local(g, Criterion::LFK, one);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].cover, Cover(8, {range(0, 3), range(4, 7)}));
  EXPECT_NEAR(r[0].quality, 1.0, 1e-15);
}

TEST(DetectLocal, SharedNodeStaysInBothCommunities) {
  const Graph g = oracle::two_k4_shared();
  const double one[] = {1.0};
  const auto r = detect_local(g, Criterion::LFK, one);
  EXPECT_EQ(r[0].cover, Cover(7, {range(0, 3), range(3, 6)}));
  EXPECT_EQ(r[0].cover.memberships(3).size(), 2u);
}

TEST(DetectLocal, LaterScalesNeverAddCommunities) {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = oracle::random_graph(40, 0.1, false, false, rng);
    const double scales[] = {1.0, 1.0, 0.8};
    const auto r = detect_local(g, Criterion::LFK, scales);
    EXPECT_LE(r[1].cover.community_count(), r[0].cover.community_count());
    EXPECT_LE(r[2].cover.community_count(), r[1].cover.community_count());
    EXPECT_EQ(r[1].regrown + r[1].dropped_encompassed, r[0].cover.community_count());
  }
}

TEST(DetectLocal, RegrowingAClosedCliqueChangesNothing) {
  const Graph g = two_disjoint_k4();
  const double twice[] = {1.0, 1.0};
  const auto r = detect_local(g, Criterion::LFK, twice);
  EXPECT_EQ(r[1].cover, r[0].cover);
  EXPECT_EQ(r[1].changed, 0u);
}

TEST(DetectLocal, HlslwFindsDisjointCliques) {
  const Graph g = two_disjoint_k4();
  const double one[] = {1.0};
  const auto r = detect_local(g, Criterion::HLSLW, one);
  EXPECT_EQ(r[0].cover, Cover(8, {range(0, 3), range(4, 7)}));
  EXPECT_NEAR(r[0].quality, 1.0, 1e-15);
}

TEST(DetectLocal, CoversStayValidAndMergedAcrossScales) {
  BenchSpec spec;
  spec.n = 300;
  spec.macro_min = 50;
  spec.macro_max = 75;
  spec.micro_min = 20;
  spec.micro_max = 25;
  spec.seed = 9;
  const Benchmark b = generate_two_level(spec);
  const double alphas[] = {1.6, 1.2, 0.9, 0.6};
  for (Criterion kind : {Criterion::LFK, Criterion::HLSLW}) {
    const auto r = detect_local(b.graph, kind, alphas);
    for (const auto& scale : r) {
      expect_valid_cover(scale.cover);
      for (std::size_t a = 0; a < scale.cover.community_count(); ++a) {
        for (std::size_t c = a + 1; c < scale.cover.community_count(); ++c) {
          EXPECT_FALSE(satisfies_merge_rule(scale.cover.community(a), scale.cover.community(c), 0.5));
        }
      }
    }
  }
}

TEST(DetectLocal, NoOverlapModeYieldsDisjointCommunities) {
  BenchSpec spec;
  spec.n = 300;
  spec.macro_min = 50;
  spec.macro_max = 75;
  spec.micro_min = 20;
  spec.micro_max = 25;
  spec.seed = 10;
  const Benchmark b = generate_two_level(spec);
  LocalDetectOptions opts;
  opts.allow_overlap = false;
  const double alphas[] = {1.4, 1.0, 0.8};
  for (Criterion kind : {Criterion::LFK, Criterion::HLSLW}) {
    for (const auto& scale : detect_local(b.graph, kind, alphas, opts)) {
      expect_valid_cover(scale.cover);
      EXPECT_TRUE(scale.cover.is_disjoint());
    }
  }
}

TEST(DetectLocal, ParameterChecks) {
  const Graph g = oracle::g7();
  const double rising[] = {0.5, 1.0};
  const double zero[] = {0.0};
  EXPECT_THROW(detect_local(g, Criterion::LFK, rising), ArgumentError);
  EXPECT_THROW(detect_local(g, Criterion::LFK, std::span<const double>{}), ArgumentError);
  EXPECT_THROW(detect_local(g, Criterion::LFK, zero), DomainError);
  const double one[] = {1.0};
  EXPECT_THROW(detect_local(g, Criterion::RB, one), ArgumentError);
}
