#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "coopbandit/uninformed.hpp"
#include "coopbandit/validate.hpp"

using namespace coopbandit;

namespace {

// K (4 ceil(3 ln(n_bar sqrt(KT))) + floor(12 ln K) + 1) + floor(12 ln K) + 1.
std::size_t expected_setup(std::size_t k, std::size_t n_bar, std::size_t t) {
  const double kd = static_cast<double>(k);
  const auto luby = static_cast<std::size_t>(
      std::ceil(3.0 * std::log(static_cast<double>(n_bar) * std::sqrt(kd * static_cast<double>(t)))));
  const auto theta = static_cast<std::size_t>(std::floor(12.0 * std::log(kd)));
  return k * (4 * luby + theta + 1) + theta + 1;
}

}  // namespace

TEST(Uninformed, SetupStepsMatchClosedFormAndBound) {
  Rng graph_rng(3);
  const Graph g = random_connected_graph(20, 0.15, graph_rng);
  Rng rng(1);
  const auto res = compute_centers_uninformed(g, 10, 100, 100000, rng);
  EXPECT_EQ(res.setup_steps, expected_setup(10, 100, 100000));
  EXPECT_EQ(res.setup_steps, uninformed_setup_steps(10, 100, 100000));
  EXPECT_LT(static_cast<double>(res.setup_steps), 12.0 * 10.0 * std::log(1e9));
  EXPECT_EQ(res.setup_steps, 1708u);
  EXPECT_NEAR(uninformed_steps_bound(10, 100, 100000), 2486.79, 0.01);
  EXPECT_EQ(res.iterations.size(), 10u);
}

TEST(Uninformed, StarHubElectedFirstLeavesNeverCenters) {
  const Graph g = star_graph(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto res = compute_centers_uninformed(g, 5, 14, 1000, rng);
    // |N(hub)| = 7, capped at K = 5, so the hub is in S_0.
    EXPECT_EQ(res.iterations[0].universe, std::vector<NodeId>{0});
    EXPECT_EQ(res.iterations[0].luby.joined, std::vector<NodeId>{0});
    EXPECT_EQ(res.centers, std::vector<NodeId>{0});
    for (std::size_t t = 1; t < 5; ++t) EXPECT_TRUE(res.iterations[t].universe.empty());
  }
}

TEST(Uninformed, SingleEdgeElectsOneCenter) {
  const Graph g = build_graph({{0, 1}}, 2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto res = compute_centers_uninformed(g, 2, 2, 10, rng);
    EXPECT_EQ(res.iterations[0].universe, (std::vector<NodeId>{0, 1}));
    ASSERT_EQ(res.centers.size(), 1u);
    const NodeId other = 1 - res.centers[0];
    EXPECT_EQ(res.partition.origin_of[other], res.centers[0]);
    EXPECT_EQ(res.partition.delay[other], 1u);
  }
}

TEST(Uninformed, RejectsSmallNBar) {
  Rng rng(1);
  EXPECT_THROW(compute_centers_uninformed(path_graph(5), 2, 4, 10, rng), Error);
}

TEST(Uninformed, RandomGraphsIndependentAndConditionallyValid) {
  Rng graph_rng(99);
  for (int inst = 0; inst < 60; ++inst) {
    const std::size_t n = 2 + inst % 40;
    const Graph g = random_connected_graph(n, uniform01(graph_rng) * 0.3, graph_rng);
    for (std::size_t k : {2, 5, 10}) {
      Rng rng(static_cast<std::uint64_t>(inst) * 31 + k);
      const auto res = compute_centers_uninformed(g, k, 2 * n, 100000, rng);
      EXPECT_TRUE(is_r_independent(g, res.centers, 2));
      bool all_maximal = true;
      for (const auto& it : res.iterations) all_maximal = all_maximal && is_r_mis(g, it.luby.joined, it.universe, 2);
      EXPECT_EQ(all_maximal, res.luby_failures == 0);
      if (all_maximal) {
        const auto report = validate_partition(g, res.partition, k);
        for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.witness;
      }
    }
  }
}
