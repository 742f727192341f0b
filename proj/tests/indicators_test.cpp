#include <gtest/gtest.h>

#include <set>

#include "bim/diffusion.hpp"
#include "bim/indicators.hpp"
#include "oracles.hpp"

namespace bim {
namespace {

DirectedGraph star(NodeId spokes) {
  std::vector<Edge> edges;
  for (NodeId i = 1; i <= spokes; ++i) edges.emplace_back(0, i);
  return DirectedGraph(spokes + 1, edges);
}

const DirectedGraph kPath3(3, {{0, 1}, {1, 2}});
const DirectedGraph kTriangle(3, {{0, 1}, {0, 2}, {1, 2}});

TEST(CostModel, OutDegreeTimesPPlusOne) {
  const auto g = star(5);
  const CostModel cm(g, 0.1);
  EXPECT_DOUBLE_EQ(node_cost(cm, 0), 1.5);
  EXPECT_DOUBLE_EQ(node_cost(cm, 3), 1.0);
  const CostModel overridden(g, 0.1, {{0, 0.05}});
  EXPECT_DOUBLE_EQ(node_cost(overridden, 0), 1.25);
  EXPECT_DOUBLE_EQ(overridden.total(std::vector<NodeId>{0, 1}), 2.25);
}

TEST(CostModel, RandomOverrides) {
  const auto g = oracle::random_digraph(200, 800, 3);
  const auto cm = CostModel::with_random_overrides(g, 0.1, 0.02, 0.05, 9);
  EXPECT_EQ(cm.overrides().size(), 4u);
  const CostModel base(g, 0.1);
  const auto none = CostModel::with_random_overrides(g, 0.1, 0.0, 0.05, 9);
  const auto all_same = CostModel::with_random_overrides(g, 0.1, 1.0, 0.1, 9);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    EXPECT_GE(cm.cost(v), 1.0);
    EXPECT_EQ(none.cost(v), base.cost(v));
    EXPECT_EQ(all_same.cost(v), base.cost(v));
  }
  EXPECT_THROW(CostModel::with_random_overrides(g, 0.1, 1.5, 0.05, 1), Error);
  EXPECT_THROW(CostModel(g, 0.1, {{500, 0.05}}), Error);
}

TEST(DegreeScore, OutDegree) {
  EXPECT_EQ(degree_score(star(4), 0), 4u);
  EXPECT_EQ(degree_score(star(4), 2), 0u);
}

TEST(Edv, EmptySet) { EXPECT_EQ(edv_set(kPath3, {}, 0.1), 0.0); }

TEST(Edv, StarCenter) {
  const std::vector<NodeId> s{0};
  EXPECT_NEAR(edv_set(star(3), s, 0.1), 1.3, 1e-12);
}

TEST(Edv, SharedNeighborCountsTwoEdges) {
  const DirectedGraph g(3, {{0, 2}, {1, 2}});
  const std::vector<NodeId> s{0, 1};
  // 2 + (1 - 0.5^2)
  EXPECT_NEAR(edv_set(g, s, 0.5), 2.75, 1e-12);
}

TEST(Edv, SingletonIsOnePlusDegreeTimesP) {
  const auto g = oracle::random_digraph(30, 90, 8);
  for (NodeId v = 0; v < 30; ++v) {
    const std::vector<NodeId> s{v};
    EXPECT_NEAR(edv_set(g, s, 0.2), 1.0 + 0.2 * static_cast<double>(g.out_degree(v)), 1e-12);
  }
}

TEST(Sigma2Node, IsolatedNode) { EXPECT_EQ(sigma2_node(star(2), 1, 0.1), 1.0); }

TEST(Sigma2Node, PathMatchesEnumeration) {
  const std::vector<NodeId> s{0};
  EXPECT_NEAR(sigma2_node(kPath3, 0, 0.1), 1.11, 1e-12);
  EXPECT_NEAR(sigma2_node(kPath3, 0, 0.1), exact_spread(kPath3, s, {.p = 0.1}), 1e-12);
}

TEST(Sigma2Node, TriangleSubtractsNeighborPair) {
  // 1 + (1 + 0.1) * 0.1 + (1 + 0) * 0.1 - 0.1^3; the live-edge enumeration
  // gives the same number: 1 + 0.1 + (1 - 0.9 * 0.99).
  const std::vector<NodeId> s{0};
  EXPECT_NEAR(sigma2_node(kTriangle, 0, 0.1), 1.209, 1e-12);
  EXPECT_NEAR(exact_spread(kTriangle, s, {.p = 0.1}), 1.209, 1e-12);
}

TEST(Sigma2Node, ExactOnDepthTwoOutTrees) {
  // Depth-2 out-trees have neither 3-hop paths nor converging paths, where
  // the two-hop indicator is exact.
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Edge> edges;
    NodeId next = 1;
    const auto children = 1 + uniform_index(rng, 3);
    for (std::size_t c = 0; c < children; ++c) {
      const NodeId child = next++;
      edges.emplace_back(0, child);
      const auto grand = uniform_index(rng, 4);
      for (std::size_t k = 0; k < grand; ++k) edges.emplace_back(child, next++);
    }
    const DirectedGraph g(next, edges);
    const std::vector<NodeId> s{0};
    const double p = 0.05 + 0.5 * uniform01(rng);
    EXPECT_NEAR(sigma2_node(g, 0, p), exact_spread(g, s, {.p = p}), 1e-12);
  }
}

TEST(Sigma2Set, WorkedTwoSeedExample) {
  // a->b, b->c with S = {a, b}: 1.11 + 1.1 - 0.1 * (1.1 - 0)
  const std::vector<NodeId> s{0, 1};
  EXPECT_NEAR(sigma2_set(kPath3, s, 0.1), 2.1, 1e-12);
  EXPECT_NEAR(oracle::sigma2_set_terms(kPath3, {0, 1}, 0.1), 2.1, 1e-12);
}

TEST(Sigma2Set, SingletonEqualsNode) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = oracle::random_digraph(25, 80, seed);
    for (NodeId v = 0; v < 25; ++v) {
      const std::vector<NodeId> s{v};
      EXPECT_DOUBLE_EQ(sigma2_set(g, s, 0.1), sigma2_node(g, v, 0.1));
    }
  }
}

TEST(Sigma2Set, DisjointComponentsAdd) {
  const DirectedGraph g(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {3, 5}});
  const std::vector<NodeId> s{0, 3};
  EXPECT_NEAR(sigma2_set(g, s, 0.2), sigma2_node(g, 0, 0.2) + sigma2_node(g, 3, 0.2), 1e-12);
}

TEST(Sigma2Set, MatchesTermByTermOracle) {
  Rng rng(99);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto g = oracle::random_digraph(14, 20 + seed, seed);
    std::set<NodeId> chosen;
    const auto k = 1 + uniform_index(rng, 8);
    while (chosen.size() < k) chosen.insert(static_cast<NodeId>(uniform_index(rng, 14)));
    const std::vector<NodeId> s(chosen.begin(), chosen.end());
    const double p = 0.1 + 0.3 * uniform01(rng);
    EXPECT_NEAR(sigma2_set(g, s, p), oracle::sigma2_set_terms(g, s, p), 1e-9) << "fixture " << seed;
  }
}

TEST(Sigma2Set, OrderAndDuplicatesDoNotMatter) {
  const auto g = oracle::random_digraph(20, 60, 4);
  const std::vector<NodeId> sorted{1, 4, 9, 13};
  const std::vector<NodeId> shuffled{13, 4, 1, 9, 4};
  EXPECT_DOUBLE_EQ(sigma2_set(g, sorted, 0.1), sigma2_set(g, shuffled, 0.1));
}

TEST(Sigma2Set, NoSeedsWithinTwoHopsAddUp) {
  // Two far-apart seeds on a long path.
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < 10; ++i) edges.emplace_back(i, i + 1);
  const DirectedGraph g(10, edges);
  const std::vector<NodeId> s{0, 5};
  EXPECT_NEAR(sigma2_set(g, s, 0.3), sigma2_node(g, 0, 0.3) + sigma2_node(g, 5, 0.3), 1e-12);
}

TEST(Cedv, Values) {
  const CostModel path_cost(kPath3, 0.1);
  EXPECT_NEAR(cedv_node(kPath3, path_cost, 0, 0.1), 1.11 / 1.1, 1e-12);
  const auto s4 = star(4);
  const CostModel star_cost(s4, 0.1);
  EXPECT_NEAR(cedv_node(s4, star_cost, 0, 0.1), 1.0, 1e-12);
  EXPECT_EQ(cedv_node(s4, star_cost, 1, 0.1), 1.0);
}

TEST(Indicators, LowerBoundsOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = generate_powerlaw_graph({.nodes = 300, .avg_degree = 5, .max_degree = 40, .seed = seed});
    const CostModel cm(g, 0.1);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      EXPECT_GE(sigma2_node(g, v, 0.1), 1.0);
      EXPECT_GT(cedv_node(g, cm, v, 0.1), 0.0);
    }
  }
}

TEST(Objectives, FactoryDispatch) {
  const std::vector<NodeId> s{0, 1};
  EXPECT_DOUBLE_EQ(make_objective(kPath3, 0.1, ObjectiveKind::Sigma2)(s), sigma2_set(kPath3, s, 0.1));
  EXPECT_DOUBLE_EQ(make_objective(kPath3, 0.1, ObjectiveKind::Edv)(s), edv_set(kPath3, s, 0.1));
}

}  // namespace
}  // namespace bim
