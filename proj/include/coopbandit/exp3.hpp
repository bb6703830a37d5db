#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coopbandit/error.hpp"

namespace coopbandit {

using Arm = std::size_t;

inline void require_arms(std::size_t arms) {
  if (arms < 2) throw Error(ErrorCode::ArmsTooFew, "need K >= 2 arms, got " + std::to_string(arms));
}

/// Probability vector over K arms.
class ActionDistribution {
 public:
  ActionDistribution() = default;
  explicit ActionDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}

  static ActionDistribution uniform(std::size_t arms) {
    return ActionDistribution(std::vector<double>(arms, 1.0 / static_cast<double>(arms)));
  }

  static ActionDistribution point_mass(std::size_t arms, Arm arm) {
    std::vector<double> p(arms, 0.0);
    p.at(arm) = 1.0;
    return ActionDistribution(std::move(p));
  }

  std::size_t arms() const { return probs_.size(); }
  double operator[](Arm i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  bool is_valid(double tolerance = 1e-12) const {
    if (probs_.empty()) return false;
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0 && p <= 1.0)) return false;
      sum += p;
    }
    return std::abs(sum - 1.0) <= tolerance;
  }

  friend bool operator==(const ActionDistribution&, const ActionDistribution&) = default;

 private:
  std::vector<double> probs_;
};

/// eta = 1/2 * sqrt(ln K * M / (K * T)).
inline double learning_rate(double mass, std::size_t arms, std::size_t horizon) {
  require_arms(arms);
  if (!(mass > 0.0) || horizon == 0)
    throw Error(ErrorCode::Config, "learning_rate needs M > 0 and T >= 1");
  const double k = static_cast<double>(arms);
  return 0.5 * std::sqrt(std::log(k) * mass / (k * static_cast<double>(horizon)));
}

/// Probability that at least one agent in the closed neighborhood plays
/// `arm`: 1 - prod (1 - p_v'(arm)).
inline double observation_probability(std::span<const std::span<const double>> neighbor_dists, Arm arm) {
  double miss = 1.0;
  for (auto p : neighbor_dists) miss *= 1.0 - p[arm];
  return 1.0 - miss;
}

inline double observation_probability(std::span<const ActionDistribution> neighbor_dists, Arm arm) {
  double miss = 1.0;
  for (const auto& p : neighbor_dists) miss *= 1.0 - p[arm];
  return 1.0 - miss;
}

struct ObservationEvent {
  Arm arm = 0;
  bool observed = false;
  double observe_prob = 1.0;
  double loss = 0.0;  // meaningful only when observed
};

/// Importance-weighted loss estimate: loss / q when observed, else 0.
inline double estimated_loss(const ObservationEvent& ev) {
  if (!(ev.observe_prob > 0.0))
    throw Error(ErrorCode::ZeroObservationProbability,
                "observation probability for arm " + std::to_string(ev.arm) + " is not positive");
  return ev.observed ? ev.loss / ev.observe_prob : 0.0;
}

/// Exponential-weights state. Weights are kept as log-weights shifted so the
/// largest is 0; the distribution is invariant under that shift.
class Exp3State {
 public:
  Exp3State(std::size_t arms, double learning_rate) : log_weights_(arms, 0.0), learning_rate_(learning_rate) {
    require_arms(arms);
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
      throw Error(ErrorCode::Config, "learning rate must be positive and finite");
  }

  /// Start from arbitrary positive weights (tests and replay).
  static Exp3State from_weights(std::span<const double> weights, double learning_rate) {
    Exp3State s(weights.size(), learning_rate);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] > 0.0)) throw Error(ErrorCode::Config, "weights must be positive");
      s.log_weights_[i] = std::log(weights[i]);
    }
    s.renormalize();
    return s;
  }

  std::size_t arms() const { return log_weights_.size(); }
  double learning_rate() const { return learning_rate_; }
  std::span<const double> log_weights() const { return log_weights_; }

  ActionDistribution distribution() const {
    std::vector<double> p(log_weights_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += (p[i] = std::exp(log_weights_[i]));
    for (double& x : p) x /= total;
    return ActionDistribution(std::move(p));
  }

  friend Exp3State exp3_update(const Exp3State& state, std::span<const double> estimates);

 private:
  void renormalize() {
    const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
    for (double& lw : log_weights_) lw -= top;
  }

  std::vector<double> log_weights_;
  double learning_rate_;
};

/// w_{t+1}(i) = w_t(i) * exp(-eta * estimate(i)), in log space.
inline Exp3State exp3_update(const Exp3State& state, std::span<const double> estimates) {
  if (estimates.size() != state.arms())
    throw Error(ErrorCode::Config, "estimate vector has wrong length");
  Exp3State next = state;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (!std::isfinite(estimates[i]) || estimates[i] < 0.0)
      throw Error(ErrorCode::NonFiniteEstimate, "estimate for arm " + std::to_string(i) + " is " +
                                                     std::to_string(estimates[i]));
    next.log_weights_[i] -= state.learning_rate_ * estimates[i];
  }
  next.renormalize();
  return next;
}

/// Inverse-CDF sampling in ascending arm order. A draw landing exactly on a
/// CDF boundary goes to the lower arm; zero-probability arms are never chosen.
inline Arm sample_action(const ActionDistribution& dist, double draw) {
  double cdf = 0.0;
  Arm last_positive = 0;
  for (Arm i = 0; i < dist.arms(); ++i) {
    if (dist[i] <= 0.0) continue;
    last_positive = i;
    cdf += dist[i];
    if (draw < cdf || (draw == cdf && draw > 0.0)) return i;
  }
  return last_positive;
}

/// Relay used by non-center agents: whatever the origin neighbor played this
/// round is played next round. Before anything arrives the agent plays uniform.
class DelayedCopy {
 public:
  explicit DelayedCopy(std::size_t arms) : current_(ActionDistribution::uniform(arms)) {}

  const ActionDistribution& play_now() const { return current_; }

  /// True until the first relayed distribution has been received.
  bool warming_up() const { return !received_; }

  /// Stage the distribution received this round; it becomes play_now() at the
  /// next round.
  void receive(const ActionDistribution& incoming) { staged_ = incoming; }

  /// Move to the next round.
  void advance() {
    if (staged_) {
      current_ = std::move(*staged_);
      staged_.reset();
      received_ = true;
    }
  }

 private:
  ActionDistribution current_;
  std::optional<ActionDistribution> staged_;
  bool received_ = false;
};

/// Functional form of the relay for a queue of pending distributions: returns
/// what to play now and the pipeline after the incoming one is enqueued.
struct DelayedCopyStep {
  ActionDistribution play_now;
  std::deque<ActionDistribution> pipeline;
};

inline DelayedCopyStep delayed_copy_advance(std::deque<ActionDistribution> pipeline,
                                            const ActionDistribution& incoming) {
  DelayedCopyStep out;
  if (pipeline.empty()) {
    out.play_now = ActionDistribution::uniform(incoming.arms());
  } else {
    out.play_now = std::move(pipeline.front());
    pipeline.pop_front();
  }
  pipeline.push_back(incoming);
  out.pipeline = std::move(pipeline);
  return out;
}

/// Checks (1 - eta*est(i)) p(i) <= p_next(i) <= 2 p(i) for every arm with a
/// relative tolerance. Returns the first violating arm, if any.
inline std::optional<Arm> sandwich_violation(const ActionDistribution& before, const ActionDistribution& after,
                                             std::span<const double> estimates, double eta,
                                             double rel_tol = 1e-9) {
  for (Arm i = 0; i < before.arms(); ++i) {
    const double lower = (1.0 - eta * estimates[i]) * before[i];
    const double upper = 2.0 * before[i];
    const double slack = rel_tol * std::max(std::abs(after[i]), std::abs(before[i]));
    if (after[i] < lower - slack || after[i] > upper + slack) return i;
  }
  return std::nullopt;
}

}  // namespace coopbandit
