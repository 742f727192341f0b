#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "bim/diffusion.hpp"
#include "oracles.hpp"

namespace bim {
namespace {

const DirectedGraph kPath2(2, {{0, 1}});
const DirectedGraph kPath3(3, {{0, 1}, {1, 2}});

TEST(SimulateOnce, EmptySeedsActivateNothing) {
  EXPECT_EQ(simulate_ic_once(kPath3, {}, {.p = 0.5}, 1), 0u);
}

TEST(SimulateOnce, ZeroProbabilityKeepsOnlySeeds) {
  const std::vector<NodeId> seeds{0, 2};
  EXPECT_EQ(simulate_ic_once(kPath3, seeds, {.p = 0.0}, 9), 2u);
}

TEST(SimulateOnce, CertainEdgesReachEverythingDownstream) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = oracle::random_digraph(15, 25, seed);
    const std::vector<NodeId> seeds{static_cast<NodeId>(seed % 15)};
    EXPECT_EQ(simulate_ic_once(g, seeds, {.p = 1.0}, seed), oracle::forward_reach(g, seeds));
  }
}

TEST(SimulateOnce, StepLimitTruncatesCascade) {
  const std::vector<NodeId> seeds{0};
  EXPECT_EQ(simulate_ic_once(kPath3, seeds, {.p = 1.0, .max_steps = 1}, 1), 2u);
  EXPECT_EQ(simulate_ic_once(kPath3, seeds, {.p = 1.0, .max_steps = 0}, 1), 1u);
}

TEST(SimulateOnce, RejectsUnknownSeedsAndBadProbability) {
  const std::vector<NodeId> bad{3};
  EXPECT_THROW(simulate_ic_once(kPath3, bad, {}, 1), Error);
  const std::vector<NodeId> ok{0};
  EXPECT_THROW(simulate_ic_once(kPath3, ok, {.p = 1.5}, 1), Error);
}

TEST(EstimateSpread, SingleEdgeMatchesOnePlusP) {
  const std::vector<NodeId> seeds{0};
  const auto est = estimate_spread(kPath2, seeds, {.p = 0.1}, 1'000'000, 2024, 4);
  EXPECT_NEAR(est.mean, 1.1, 3.0 * est.std_error);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_EQ(est.replications, 1'000'000u);
}

TEST(EstimateSpread, ZeroProbabilityIsExact) {
  const std::vector<NodeId> seeds{0, 1};
  const auto est = estimate_spread(kPath3, seeds, {.p = 0.0}, 500, 3);
  EXPECT_EQ(est.mean, 2.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(EstimateSpread, DeterministicAndIndependentOfWorkers) {
  const auto g = oracle::random_digraph(60, 200, 5);
  const std::vector<NodeId> seeds{1, 7, 30};
  const ICParams ic{.p = 0.2};
  const auto a = estimate_spread(g, seeds, ic, 5000, 77, 1);
  const auto b = estimate_spread(g, seeds, ic, 5000, 77, 1);
  const auto c = estimate_spread(g, seeds, ic, 5000, 77, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a.mean, estimate_spread(g, seeds, ic, 5000, 78).mean);
}

TEST(EstimateSpread, RequiresReplications) {
  const std::vector<NodeId> seeds{0};
  EXPECT_THROW(estimate_spread(kPath3, seeds, {}, 0, 1), Error);
}

TEST(ExactSpread, PathOfThree) {
  const std::vector<NodeId> seeds{0};
  // 1 + p + p^2
  EXPECT_NEAR(exact_spread(kPath3, seeds, {.p = 0.1}), 1.11, 1e-12);
}

TEST(ExactSpread, AllNodesSeeded) {
  const auto g = oracle::random_digraph(8, 20, 4);
  std::vector<NodeId> all(8);
  std::iota(all.begin(), all.end(), NodeId{0});
  EXPECT_DOUBLE_EQ(exact_spread(g, all, {.p = 0.3}), 8.0);
}

TEST(ExactSpread, TwoDisjointEdges) {
  const DirectedGraph g(4, {{0, 1}, {2, 3}});
  const std::vector<NodeId> seeds{0, 2};
  // 2 + 2 * 0.5
  EXPECT_NEAR(exact_spread(g, seeds, {.p = 0.5}), 3.0, 1e-12);
}

TEST(ExactSpread, ConvergingPaths) {
  // 0->1, 0->2, 1->2: P(2 active) = 1 - (1-p)(1-p^2).
  const DirectedGraph g(3, {{0, 1}, {0, 2}, {1, 2}});
  const std::vector<NodeId> seeds{0};
  const double p = 0.1;
  EXPECT_NEAR(exact_spread(g, seeds, {.p = p}), 1.0 + p + (1.0 - (1.0 - p) * (1.0 - p * p)), 1e-12);
}

TEST(ExactSpread, RejectsLargeGraphs) {
  const auto g = oracle::random_digraph(10, 23, 1);
  const std::vector<NodeId> seeds{0};
  EXPECT_THROW(exact_spread(g, seeds, {}), Error);
}

TEST(ExactSpread, CertainEdgesGiveReachableSetSize) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto g = oracle::random_digraph(12, 18, seed);
    const std::vector<NodeId> seeds{static_cast<NodeId>(seed % 12), static_cast<NodeId>((seed * 5) % 12)};
    EXPECT_NEAR(exact_spread(g, seeds, {.p = 1.0}), static_cast<double>(oracle::forward_reach(g, seeds)), 1e-12);
  }
}

TEST(ExactSpread, MonotoneInSeeds) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = oracle::random_digraph(9, 16, seed + 100);
    std::vector<NodeId> seeds;
    double previous = 0.0;
    for (NodeId v = 0; v < 9; v += 2) {
      seeds.push_back(v);
      const double now = exact_spread(g, seeds, {.p = 0.3});
      EXPECT_GE(now, previous - 1e-12);
      previous = now;
    }
  }
}

TEST(ExactSpread, AgreesWithMonteCarlo) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = oracle::random_digraph(10, 20, seed + 500);
    const std::vector<NodeId> seeds{0, static_cast<NodeId>(seed % 10)};
    const ICParams ic{.p = 0.3};
    const auto est = estimate_spread(g, seeds, ic, 100'000, seed, 4);
    EXPECT_NEAR(est.mean, exact_spread(g, seeds, ic), 4.0 * est.std_error) << "fixture " << seed;
  }
}

}  // namespace
}  // namespace bim
