#include <gtest/gtest.h>

#include <vector>

#include "coopbandit/bounds.hpp"
#include "coopbandit/luby.hpp"

using namespace coopbandit;

TEST(Luby, LoneParticipantJoinsInFirstRound) {
  Rng rng(1);
  const auto t = luby_2mis(path_graph(4), std::vector<NodeId>{2}, 10, rng);
  EXPECT_EQ(t.joined, std::vector<NodeId>{2});
  EXPECT_EQ(t.rounds_used, 1u);
  EXPECT_EQ(t.step_cost, 4u);
  EXPECT_TRUE(t.leftover.empty());
}

TEST(Luby, EmptyUniverse) {
  Rng rng(1);
  const auto t = luby_2mis(path_graph(4), std::vector<NodeId>{}, 10, rng);
  EXPECT_TRUE(t.joined.empty());
  EXPECT_EQ(t.rounds_used, 0u);
  EXPECT_EQ(t.step_cost, 0u);
}

TEST(Luby, CliqueElectsExactlyOne) {
  const Graph g = clique_graph(8);
  std::vector<NodeId> all{0, 1, 2, 3, 4, 5, 6, 7};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto t = luby_2mis(g, all, 5, rng);
    EXPECT_EQ(t.joined.size(), 1u);
    EXPECT_EQ(t.rounds_used, 1u);
  }
}

TEST(Luby, DistanceTwoConflictSeenThroughCommonNeighbor) {
  // 0 and 2 are not adjacent but share neighbor 1, so only one may join.
  const Graph g = path_graph(3);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto t = luby_2mis(g, std::vector<NodeId>{0, 2}, 5, rng);
    EXPECT_EQ(t.joined.size(), 1u);
  }
}

TEST(Luby, RandomGraphsStayTwoIndependentAndLeftoverMarksNonMaximality) {
  Rng rng(77);
  int non_maximal = 0;
  for (int inst = 0; inst < 400; ++inst) {
    const Graph g = random_connected_graph(2 + inst % 30, uniform01(rng) * 0.3, rng);
    std::vector<NodeId> universe;
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (uniform01(rng) < 0.7) universe.push_back(v);
    // Tiny budgets force some truncated runs.
    const auto t = luby_2mis(g, universe, 1 + inst % 3, rng);
    EXPECT_TRUE(is_r_independent(g, t.joined, 2));
    for (NodeId v : t.joined) EXPECT_TRUE(std::binary_search(universe.begin(), universe.end(), v));
    const bool maximal = is_r_mis(g, t.joined, universe, 2);
    EXPECT_EQ(maximal, t.leftover.empty());
    EXPECT_EQ(t.step_cost, 4 * t.rounds_used);
    non_maximal += !maximal;
  }
  EXPECT_GT(non_maximal, 0);
}

TEST(Luby, SameSeedSameTranscript) {
  Rng a(5), b(5), rng(9);
  const Graph g = random_connected_graph(25, 0.1, rng);
  std::vector<NodeId> all(25);
  for (NodeId v = 0; v < 25; ++v) all[v] = v;
  const auto x = luby_2mis(g, all, 20, a), y = luby_2mis(g, all, 20, b);
  EXPECT_EQ(x.joined, y.joined);
  EXPECT_EQ(x.rounds_used, y.rounds_used);
}

TEST(LubyBudget, ClosedForm) {
  // ceil(3 ln(n / sqrt(delta))) and ceil(3 ln(n_bar sqrt(K T))).
  EXPECT_EQ(luby_rounds_for(10, 0.01), static_cast<std::size_t>(std::ceil(3.0 * std::log(10.0 / 0.1))));
  EXPECT_EQ(uninformed_luby_rounds(10, 100, 100000),
            static_cast<std::size_t>(std::ceil(3.0 * std::log(100.0 * std::sqrt(1e6)))));
  EXPECT_EQ(uninformed_luby_rounds(10, 22, 100000), 30u);
}
