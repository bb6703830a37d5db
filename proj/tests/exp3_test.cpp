#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <vector>

#include "coopbandit/exp3.hpp"
#include "coopbandit/random.hpp"

using namespace coopbandit;

TEST(LearningRate, Examples) {
  EXPECT_NEAR(learning_rate(1.0, 2, 1), 0.29435, 5e-6);
  EXPECT_NEAR(learning_rate(1.0, 2, 1), 0.5 * std::sqrt(std::log(2.0) / 2.0), 1e-15);
  EXPECT_NEAR(learning_rate(10.0, 10, 100000), 0.0024, 5e-5);
  for (std::size_t k : {2, 3, 7, 20})
    for (std::size_t t : {1, 50, 100000})
      EXPECT_NEAR(learning_rate(static_cast<double>(k), k, t),
                  0.5 * std::sqrt(std::log(static_cast<double>(k)) / static_cast<double>(t)), 1e-15);
}

TEST(LearningRate, AtMostHalfOverKInTheBoundRegime) {
  for (std::size_t k = 2; k <= 30; ++k) {
    const auto t = static_cast<std::size_t>(std::ceil(k * k * std::log(static_cast<double>(k))));
    for (std::size_t m = 1; m <= k; ++m)
      EXPECT_LE(learning_rate(static_cast<double>(m), k, t), 1.0 / (2.0 * k) + 1e-15);
  }
}

TEST(LearningRate, RejectsOneArm) { EXPECT_THROW(learning_rate(1.0, 1, 10), Error); }

TEST(ObservationProbability, Examples) {
  const std::vector<ActionDistribution> one{ActionDistribution({0.5, 0.5})};
  EXPECT_DOUBLE_EQ(observation_probability(one, 0), 0.5);
  const std::vector<ActionDistribution> two{ActionDistribution({0.5, 0.5}), ActionDistribution({0.5, 0.5})};
  EXPECT_DOUBLE_EQ(observation_probability(two, 1), 0.75);
  const std::vector<ActionDistribution> sure{ActionDistribution({0.2, 0.8}), ActionDistribution({1.0, 0.0})};
  EXPECT_DOUBLE_EQ(observation_probability(sure, 0), 1.0);
}

TEST(EstimatedLoss, Examples) {
  EXPECT_DOUBLE_EQ(estimated_loss({0, true, 0.5, 1.0}), 2.0);
  EXPECT_DOUBLE_EQ(estimated_loss({0, false, 0.5, 1.0}), 0.0);
  EXPECT_NEAR(estimated_loss({0, true, 0.75, 0.3}), 0.4, 1e-15);
  EXPECT_THROW(estimated_loss({0, true, 0.0, 1.0}), Error);
}

TEST(EstimatedLoss, UnbiasedOverObservationDraws) {
  Rng rng(42);
  const int n = 200000;
  for (double q : {0.1, 0.5, 0.9}) {
    for (double loss : {0.3, 1.0}) {
      double sum = 0.0, sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = estimated_loss({0, uniform01(rng) < q, q, loss});
        sum += x;
        sq += x * x;
      }
      const double mean = sum / n;
      const double sd = std::sqrt(sq / n - mean * mean);
      EXPECT_LE(std::abs(mean - loss), 3.0 * sd / std::sqrt(static_cast<double>(n))) << "q=" << q;
    }
  }
}

TEST(Exp3Update, ZeroEstimatesLeaveDistributionUnchanged) {
  const std::vector<double> w{1.0, 2.0, 5.0};
  const auto s = Exp3State::from_weights(w, 0.1);
  const std::vector<double> zeros(3, 0.0);
  const auto next = exp3_update(s, zeros);
  for (Arm i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(next.distribution()[i], s.distribution()[i]);
}

TEST(Exp3Update, LossMovesMassAway) {
  const Exp3State s(2, 0.2);
  const std::vector<double> est{0.7, 0.0};
  const auto p = exp3_update(s, est).distribution();
  EXPECT_LT(p[0], 0.5);
  EXPECT_GT(p[1], 0.5);
}

TEST(Exp3Update, ClosedFormTwoArms) {
  const std::vector<double> w{1.0, 1.0};
  const std::vector<double> est{1.0, 0.0};
  const auto p = exp3_update(Exp3State::from_weights(w, 0.1), est).distribution();
  EXPECT_NEAR(p[0], std::exp(-0.1) / (std::exp(-0.1) + 1.0), 1e-15);
  EXPECT_NEAR(p[0], 0.47502, 5e-6);
}

TEST(Exp3Update, RejectsBadEstimates) {
  const Exp3State s(2, 0.1);
  EXPECT_THROW(exp3_update(s, std::vector<double>{-1.0, 0.0}), Error);
  EXPECT_THROW(exp3_update(s, std::vector<double>{NAN, 0.0}), Error);
  EXPECT_THROW(exp3_update(s, std::vector<double>{0.0}), Error);
}

TEST(Exp3Update, LogSpaceSurvivesLongHorizons) {
  Exp3State s(3, 0.5);
  const std::vector<double> est{50.0, 0.0, 10.0};
  for (int t = 0; t < 100000; ++t) s = exp3_update(s, est);
  const auto p = s.distribution();
  EXPECT_TRUE(p.is_valid());
  EXPECT_DOUBLE_EQ(p[1], 1.0);
  EXPECT_DOUBLE_EQ(s.log_weights()[1], 0.0);
}

// Random center updates with eta <= 1/(2K): probability sandwich, validity,
// p * estimate <= 1 and shrinking total weight.
TEST(Exp3Update, SandwichAndValidityProperties) {
  Rng rng(7);
  for (int inst = 0; inst < 2000; ++inst) {
    const std::size_t k = 2 + inst % 9;
    std::vector<double> w(k);
    for (double& x : w) x = std::exp(-10.0 * uniform01(rng));
    const double eta = uniform01(rng) / (2.0 * k);
    const auto s = Exp3State::from_weights(w, eta);
    const auto p = s.distribution();
    std::vector<ActionDistribution> hood{p};
    for (int j = 0; j < 1 + inst % 5; ++j) {
      std::vector<double> q(k);
      double total = 0.0;
      for (double& x : q) total += (x = uniform01(rng));
      for (double& x : q) x /= total;
      hood.emplace_back(std::move(q));
    }
    std::vector<bool> seen(k, false);
    for (const auto& d : hood) seen[sample_action(d, uniform01(rng))] = true;
    std::vector<double> est(k);
    for (Arm i = 0; i < k; ++i) {
      est[i] = estimated_loss({i, seen[i], observation_probability(hood, i), uniform01(rng)});
      EXPECT_LE(p[i] * est[i], 1.0 + 1e-12);
    }
    const auto next = exp3_update(s, est).distribution();
    EXPECT_TRUE(next.is_valid(1e-12));
    EXPECT_FALSE(sandwich_violation(p, next, est, eta).has_value());
    double shrink = 0.0;
    for (Arm i = 0; i < k; ++i) shrink += p[i] * std::exp(-eta * est[i]);
    EXPECT_LE(shrink, 1.0);
  }
}

TEST(Sandwich, DetectsViolation) {
  const ActionDistribution before({0.5, 0.5});
  const ActionDistribution doubled({0.0, 1.0});
  const std::vector<double> est{10.0, 0.0};
  EXPECT_FALSE(sandwich_violation(before, doubled, est, 0.1).has_value());
  const ActionDistribution dropped({0.1, 0.9});
  EXPECT_EQ(sandwich_violation(before, dropped, std::vector<double>{0.0, 0.0}, 0.1), Arm{0});
  const ActionDistribution tripled({0.1, 0.9});
  const ActionDistribution from({0.7, 0.3});
  EXPECT_EQ(sandwich_violation(from, tripled, std::vector<double>{1.0, 0.0}, 0.1), Arm{0});
}

TEST(SampleAction, Examples) {
  const auto point = ActionDistribution::point_mass(5, 3);
  for (double draw : {0.0, 0.2, 0.5, 0.999999}) EXPECT_EQ(sample_action(point, draw), 3u);
  const auto uni = ActionDistribution::uniform(4);
  // CDF 0.25, 0.5, 0.75, 1.0: 0.70 lies in (0.5, 0.75].
  EXPECT_EQ(sample_action(uni, 0.70), 2u);
  EXPECT_EQ(sample_action(uni, 0.0), 0u);
  EXPECT_EQ(sample_action(uni, 0.5), 1u);
  EXPECT_EQ(sample_action(uni, 0.9999999), 3u);
}

TEST(SampleAction, FrequenciesMatchProbabilities) {
  Rng rng(99);
  const ActionDistribution d({0.1, 0.0, 0.6, 0.3});
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[sample_action(d, uniform01(rng))];
  EXPECT_EQ(counts[1], 0);
  for (Arm i = 0; i < 4; ++i) {
    const double sd = std::sqrt(d[i] * (1 - d[i]) / n);
    EXPECT_NEAR(counts[i] / static_cast<double>(n), d[i], 4 * sd + 1e-12);
  }
}

TEST(DelayedCopy, PlaysUniformThenRelaysWithOneRoundLatency) {
  DelayedCopy relay(3);
  EXPECT_EQ(relay.play_now(), ActionDistribution::uniform(3));
  EXPECT_TRUE(relay.warming_up());
  const ActionDistribution q({0.2, 0.3, 0.5});
  relay.receive(q);
  EXPECT_EQ(relay.play_now(), ActionDistribution::uniform(3));
  relay.advance();
  EXPECT_EQ(relay.play_now(), q);
  EXPECT_FALSE(relay.warming_up());
  relay.advance();
  EXPECT_EQ(relay.play_now(), q);
}

TEST(DelayedCopy, ChainOfRelaysDelaysByDepth) {
  // center -> a -> b: the center's round-t distribution reaches b at t + 2.
  std::vector<ActionDistribution> center;
  for (int t = 0; t < 6; ++t) center.push_back(ActionDistribution({0.1 * t, 1.0 - 0.1 * t}));
  DelayedCopy a(2), b(2);
  for (int t = 0; t < 6; ++t) {
    if (t >= 2) EXPECT_EQ(b.play_now(), center[t - 2]);
    else EXPECT_EQ(b.play_now(), ActionDistribution::uniform(2));
    b.receive(a.play_now());
    a.receive(center[t]);
    a.advance();
    b.advance();
  }
}

TEST(DelayedCopy, FunctionalPipeline) {
  const ActionDistribution q({0.9, 0.1});
  auto step = delayed_copy_advance({}, q);
  EXPECT_EQ(step.play_now, ActionDistribution::uniform(2));
  auto next = delayed_copy_advance(step.pipeline, ActionDistribution::uniform(2));
  EXPECT_EQ(next.play_now, q);
}
