#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "coopbandit/report.hpp"

using namespace coopbandit;

TEST(RegretReport, ZeroLossRunHasZeroRatios) {
  const Graph g = star_graph(3);
  const auto r = run_informed(g, 2, 100, LossOracle::matrix({{0.0, 0.0}}), 0);
  const auto rep = regret_report(g, r);
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.regret, 0.0);
    EXPECT_EQ(row.ratio_individual(), 0.0);
    EXPECT_EQ(row.ratio_corollary(), 0.0);
  }
}

TEST(RegretReport, BoundColumnsMatchIndependentFormulas) {
  Rng rng(4);
  const Graph g = random_connected_graph(14, 0.2, rng);
  const std::size_t k = 5, horizon = 2000, n_bar = 28;
  const auto oracle = LossOracle::bernoulli({0.3, 0.5, 0.5, 0.6, 0.7}, 1);
  const double lk = std::log(5.0);
  for (Setting s : {Setting::Informed, Setting::Uninformed}) {
    const auto r = s == Setting::Informed ? run_informed(g, k, horizon, oracle, 2)
                                          : run_uninformed(g, k, n_bar, horizon, oracle, 2);
    const auto rep = regret_report(g, r);
    for (const auto& row : rep.rows) {
      ASSERT_FALSE(row.mass.is_nil());
      const double m = row.mass.center_mass() * std::exp(-static_cast<double>(row.mass.depth()) / 6.0);
      double individual = 7.0 * std::sqrt(lk * 5.0 / m * horizon);
      double corollary = 12.0 * std::sqrt(lk * (1.0 + 5.0 / row.degree) * horizon);
      if (s == Setting::Uninformed) {
        individual += static_cast<double>(row.setup_steps);
        corollary = 12.0 * (5.0 * std::log(25.0 * n_bar * horizon) + std::sqrt(lk * (1.0 + 5.0 / row.degree) * horizon)) + 1.0;
      }
      EXPECT_NEAR(row.bound_individual, individual, 1e-9 * individual);
      EXPECT_NEAR(row.bound_corollary, corollary, 1e-9 * corollary);
      EXPECT_TRUE(std::isfinite(row.ratio_individual()));
      EXPECT_EQ(row.degree, g.closed_degree(row.agent));
      if (row.role == Role::Center)
        EXPECT_NEAR(row.bound_center, 4.0 * std::sqrt(lk * 5.0 / row.mass.center_mass() * horizon), 1e-9);
      else
        EXPECT_TRUE(std::isnan(row.bound_center));
    }
  }
}

TEST(RegretReport, AverageRegretUsesExactIndependenceNumber) {
  const Graph g = star_graph(6);
  const auto r = run_informed(g, 3, 100, LossOracle::bernoulli({0.2, 0.5, 0.5}, 0), 0);
  const auto rep = regret_report(g, r);
  ASSERT_TRUE(rep.independence.has_value());
  EXPECT_EQ(*rep.independence, 6u);
  EXPECT_NEAR(rep.inverse_degree_sum, 1.0 / 7.0 + 6.0 / 2.0, 1e-12);
  EXPECT_TRUE(rep.inverse_sum_within_alpha());
  EXPECT_NEAR(*rep.average_scale, std::sqrt((1.0 + 3.0 * 6.0 / 7.0) * 100.0), 1e-12);
}

TEST(RegretReport, InverseDegreeSumBelowAlphaOnRandomGraphs) {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const Graph g = random_connected_graph(2 + i % 20, uniform01(rng) * 0.5, rng);
    const auto r = run_informed(g, 2, 5, LossOracle::matrix({{0.0, 1.0}}), 0);
    EXPECT_TRUE(regret_report(g, r).inverse_sum_within_alpha());
  }
}

TEST(RegretReport, SummarizeAveragesOverSeeds) {
  const Graph g = path_graph(3);
  const auto oracle = LossOracle::bernoulli({0.3, 0.6}, 5);
  std::vector<RegretReport> reps;
  for (std::uint64_t s = 0; s < 4; ++s) reps.push_back(regret_report(g, run_informed(g, 2, 200, oracle, s)));
  const auto sum = summarize(reps);
  ASSERT_EQ(sum.size(), 3u);
  for (NodeId v = 0; v < 3; ++v) {
    double mean = 0.0;
    for (const auto& r : reps) mean += r.rows[v].regret_semi / 4.0;
    EXPECT_NEAR(sum[v].mean_regret_semi, mean, 1e-12);
    EXPECT_EQ(sum[v].runs, 4u);
  }
}
