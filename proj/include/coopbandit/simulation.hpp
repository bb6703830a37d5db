#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "coopbandit/adversary.hpp"
#include "coopbandit/bounds.hpp"
#include "coopbandit/exp3.hpp"
#include "coopbandit/graph.hpp"
#include "coopbandit/partition.hpp"
#include "coopbandit/random.hpp"
#include "coopbandit/uninformed.hpp"

namespace coopbandit {

enum class Role : std::uint8_t { Center, CenterAdjacent, Simple, Unassigned, Setup };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::Center: return "center";
    case Role::CenterAdjacent: return "center-adjacent";
    case Role::Simple: return "simple";
    case Role::Unassigned: return "unassigned";
    case Role::Setup: return "setup";
  }
  return "?";
}

enum class Setting { Informed, Uninformed };

inline std::string_view to_string(Setting s) { return s == Setting::Informed ? "informed" : "uninformed"; }

/// m_t(v) = <v, t, I_t(v), loss_t(I_t(v)), p_t^v>. The distribution is a view
/// into the sender's state for the current round.
struct RoundMessage {
  NodeId sender = kNoNode;
  std::size_t step = 0;
  Arm action = 0;
  double loss = 0.0;
  std::span<const double> distribution;
};

/// One agent's play in one step, as seen by observers and the run log.
struct PlayRecord {
  std::size_t step = 0;  // global step, setup included
  NodeId agent = kNoNode;
  Arm action = 0;
  double loss = 0.0;
  Role role = Role::Setup;
  bool warmup = false;  // non-center still playing uniform before the relay fills
  std::span<const double> distribution;
};

using PlayObserver = std::function<void(const PlayRecord&)>;

struct SimulationOptions {
  /// Check the per-update probability sandwich at every center.
  bool debug_invariants = false;
  PlayObserver observer;
};

struct RunResult {
  Setting setting = Setting::Informed;
  std::size_t arms = 0;
  std::size_t horizon = 0;
  std::size_t n_bar = 0;
  std::size_t setup_steps = 0;
  std::uint64_t adversary_seed = 0;
  std::uint64_t policy_seed = 0;
  Partition partition;
  bool bounds_applicable = false;

  // Full timeline (setup + T).
  std::vector<double> cumulative_loss;
  std::vector<double> cumulative_expected_loss;
  std::vector<double> arm_loss;
  Arm best_arm = 0;
  double best_arm_loss = 0.0;
  std::vector<double> regret;
  std::vector<double> regret_semi;

  // Policy rounds only (the T-step variant).
  std::vector<double> policy_loss;
  std::vector<double> policy_expected_loss;
  std::vector<double> policy_arm_loss;
  Arm policy_best_arm = 0;
  double policy_best_arm_loss = 0.0;
  std::vector<double> policy_regret;
  std::vector<double> policy_regret_semi;

  std::uint64_t digest = 0;
  std::size_t warmup_plays = 0;
  std::size_t sandwich_checks = 0;
  std::size_t sandwich_violations = 0;
  std::size_t luby_failures = 0;
};

inline Role role_of(const Partition& p, NodeId v) {
  if (p.center_of[v] == kNoNode) return Role::Unassigned;
  if (p.center_of[v] == v) return Role::Center;
  return p.delay[v] == 1 ? Role::CenterAdjacent : Role::Simple;
}

/// Round engine for the center-based policy over a fixed partition.
///
/// Centers run Exp3 with eta = 1/2 sqrt(ln K * M(c) / (K T)) and update from
/// everything their closed neighborhood reported this round. Every other agent
/// plays next round whatever its origin neighbor played this round.
class CooperativeWorld {
 public:
  CooperativeWorld(const Graph& g, const Partition& p, std::size_t arms, std::size_t horizon,
                   bool debug_invariants = false)
      : graph_(&g), partition_(&p), arms_(arms), debug_(debug_invariants) {
    require_arms(arms);
    const std::size_t n = g.node_count();
    if (p.node_count() != n) throw Error(ErrorCode::Config, "partition size does not match graph");
    exp3_slot_.assign(n, kNoSlot);
    for (NodeId v = 0; v < n; ++v) {
      roles_.push_back(role_of(p, v));
      relays_.emplace_back(arms);
      if (roles_[v] == Role::Center) {
        exp3_slot_[v] = centers_.size();
        const double mass = static_cast<double>(capped_degree(g.closed_degree(v), arms));
        centers_.emplace_back(arms, learning_rate(mass, arms, horizon));
      }
    }
    current_.assign(n, ActionDistribution::uniform(arms));
    messages_.resize(n);
    estimates_.resize(arms);
  }

  std::size_t rounds_played() const { return round_; }
  const std::vector<RoundMessage>& messages() const { return messages_; }
  const ActionDistribution& distribution(NodeId v) const { return current_[v]; }
  Role role(NodeId v) const { return roles_[v]; }
  std::size_t sandwich_checks() const { return sandwich_checks_; }
  std::size_t sandwich_violations() const { return sandwich_violations_; }

  double center_learning_rate(NodeId c) const { return centers_.at(exp3_slot_.at(c)).learning_rate(); }

  /// Plays one synchronous round at global step `step`:
  ///   1. every agent samples from its current distribution (agent order),
  ///   2. losses are charged from `losses`,
  ///   3. messages are published to closed neighborhoods,
  ///   4. centers update from the messages; non-centers stage U(v)'s
  ///      distribution for the next round.
  /// `on_play` sees each agent's record before the state moves on.
  template <class OnPlay>
  void advance_round(std::size_t step, std::span<const double> losses, Rng& rng, OnPlay&& on_play) {
    const std::size_t n = graph_->node_count();
    for (NodeId v = 0; v < n; ++v) {
      if (roles_[v] == Role::Center) current_[v] = centers_[exp3_slot_[v]].distribution();
      else if (roles_[v] != Role::Unassigned) current_[v] = relays_[v].play_now();
    }
    for (NodeId v = 0; v < n; ++v) {
      const Arm action = sample_action(current_[v], uniform01(rng));
      messages_[v] = RoundMessage{v, step, action, losses[action], current_[v].probs()};
      const bool warmup = roles_[v] != Role::Center && roles_[v] != Role::Unassigned &&
                          round_ < partition_->delay[v];
      on_play(PlayRecord{step, v, action, losses[action], roles_[v], warmup, current_[v].probs()});
    }
    for (NodeId v = 0; v < n; ++v) {
      switch (roles_[v]) {
        case Role::Center: update_center(v); break;
        case Role::CenterAdjacent:
        case Role::Simple:
          relays_[v].receive(ActionDistribution(std::vector<double>(
              messages_[partition_->origin_of[v]].distribution.begin(),
              messages_[partition_->origin_of[v]].distribution.end())));
          break;
        default: break;
      }
    }
    for (auto& r : relays_) r.advance();
    ++round_;
  }

 private:
  static constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

  void update_center(NodeId c) {
    Exp3State& state = centers_[exp3_slot_[c]];
    const auto hood = graph_->neighbors(c);
    for (Arm i = 0; i < arms_; ++i) {
      ObservationEvent ev;
      ev.arm = i;
      double miss = 1.0 - messages_[c].distribution[i];
      if (messages_[c].action == i) {
        ev.observed = true;
        ev.loss = messages_[c].loss;
      }
      for (NodeId w : hood) {
        const RoundMessage& m = messages_[w];
        miss *= 1.0 - m.distribution[i];
        if (m.action == i) {
          ev.observed = true;
          ev.loss = m.loss;
        }
      }
      ev.observe_prob = 1.0 - miss;
      // An arm whose probability underflowed everywhere cannot have been played.
      estimates_[i] = (!ev.observed && !(ev.observe_prob > 0.0)) ? 0.0 : estimated_loss(ev);
    }
    Exp3State next = exp3_update(state, estimates_);
    if (debug_) {
      ++sandwich_checks_;
      if (sandwich_violation(current_[c], next.distribution(), estimates_, state.learning_rate()))
        ++sandwich_violations_;
    }
    state = std::move(next);
  }

  const Graph* graph_;
  const Partition* partition_;
  std::size_t arms_;
  bool debug_;
  std::size_t round_ = 0;
  std::vector<Role> roles_;
  std::vector<std::size_t> exp3_slot_;
  std::vector<Exp3State> centers_;
  std::vector<DelayedCopy> relays_;
  std::vector<ActionDistribution> current_;
  std::vector<RoundMessage> messages_;
  std::vector<double> estimates_;
  std::size_t sandwich_checks_ = 0;
  std::size_t sandwich_violations_ = 0;
};

namespace detail {

/// Accumulates losses, digests and observer callbacks for one run.
class Ledger {
 public:
  Ledger(RunResult& result, std::size_t n, std::size_t arms, const SimulationOptions& options)
      : result_(&result), options_(&options) {
    result.cumulative_loss.assign(n, 0.0);
    result.cumulative_expected_loss.assign(n, 0.0);
    result.policy_loss.assign(n, 0.0);
    result.policy_expected_loss.assign(n, 0.0);
    result.arm_loss.assign(arms, 0.0);
    result.policy_arm_loss.assign(arms, 0.0);
  }

  void charge_arms(std::span<const double> losses, bool policy_phase) {
    for (Arm i = 0; i < losses.size(); ++i) {
      result_->arm_loss[i] += losses[i];
      if (policy_phase) result_->policy_arm_loss[i] += losses[i];
    }
  }

  void record(const PlayRecord& rec, std::span<const double> losses, bool policy_phase) {
    double expected = 0.0;
    for (Arm i = 0; i < losses.size(); ++i) expected += rec.distribution[i] * losses[i];
    result_->cumulative_loss[rec.agent] += rec.loss;
    result_->cumulative_expected_loss[rec.agent] += expected;
    if (policy_phase) {
      result_->policy_loss[rec.agent] += rec.loss;
      result_->policy_expected_loss[rec.agent] += expected;
    }
    if (rec.warmup) ++result_->warmup_plays;
    digest_.add(static_cast<std::uint64_t>(rec.step));
    digest_.add(static_cast<std::uint32_t>(rec.agent));
    digest_.add(static_cast<std::uint64_t>(rec.action));
    digest_.add(rec.loss);
    digest_.add(static_cast<std::uint8_t>(rec.role));
    if (options_->observer) options_->observer(rec);
  }

  void finish() {
    RunResult& r = *result_;
    auto best = [](const std::vector<double>& arm_loss, Arm& arm, double& loss) {
      arm = static_cast<Arm>(std::min_element(arm_loss.begin(), arm_loss.end()) - arm_loss.begin());
      loss = arm_loss[arm];
    };
    best(r.arm_loss, r.best_arm, r.best_arm_loss);
    best(r.policy_arm_loss, r.policy_best_arm, r.policy_best_arm_loss);
    const std::size_t n = r.cumulative_loss.size();
    r.regret.resize(n);
    r.regret_semi.resize(n);
    r.policy_regret.resize(n);
    r.policy_regret_semi.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      r.regret[v] = r.cumulative_loss[v] - r.best_arm_loss;
      r.regret_semi[v] = r.cumulative_expected_loss[v] - r.best_arm_loss;
      r.policy_regret[v] = r.policy_loss[v] - r.policy_best_arm_loss;
      r.policy_regret_semi[v] = r.policy_expected_loss[v] - r.policy_best_arm_loss;
    }
    r.digest = digest_.value();
  }

 private:
  RunResult* result_;
  const SimulationOptions* options_;
  Fnv1a64 digest_;
};

inline void play_policy(const Graph& g, std::size_t arms, std::size_t horizon, const LossOracle& adversary,
                        Rng& rng, const SimulationOptions& options, Ledger& ledger, RunResult& result) {
  CooperativeWorld world(g, result.partition, arms, horizon, options.debug_invariants);
  std::vector<double> losses(arms);
  for (std::size_t r = 0; r < horizon; ++r) {
    const std::size_t step = result.setup_steps + r;
    adversary.fill_round(step, losses);
    ledger.charge_arms(losses, true);
    world.advance_round(step, losses, rng, [&](const PlayRecord& rec) { ledger.record(rec, losses, true); });
  }
  result.sandwich_checks = world.sandwich_checks();
  result.sandwich_violations = world.sandwich_violations();
}

inline void check_run_args(const Graph& g, std::size_t arms, std::size_t horizon, const LossOracle& adversary) {
  require_arms(arms);
  if (horizon == 0) throw Error(ErrorCode::Config, "horizon must be positive");
  if (adversary.arms() != arms) throw Error(ErrorCode::Config, "adversary arm count differs from K");
  if (g.node_count() < 2) throw Error(ErrorCode::Config, "need at least two agents");
}

}  // namespace detail

/// Informed setting: the partition is computed offline at no step cost, then
/// T rounds of the center-based policy are played.
inline RunResult run_informed(const Graph& g, std::size_t arms, std::size_t horizon, const LossOracle& adversary,
                              std::uint64_t policy_seed, const SimulationOptions& options = {}) {
  detail::check_run_args(g, arms, horizon, adversary);
  RunResult result;
  result.setting = Setting::Informed;
  result.arms = arms;
  result.horizon = horizon;
  result.adversary_seed = adversary.seed();
  result.policy_seed = policy_seed;
  result.bounds_applicable = bounds_regime(arms, horizon);
  result.partition = partition_informed(g, arms);

  Rng rng(policy_seed);
  detail::Ledger ledger(result, g.node_count(), arms, options);
  detail::play_policy(g, arms, horizon, adversary, rng, options, ledger, result);
  ledger.finish();
  return result;
}

/// Uninformed setting: the distributed election runs first while every agent
/// plays uniformly random arms; those setup steps are charged to the same
/// ledger, then T rounds of the center-based policy follow.
inline RunResult run_uninformed(const Graph& g, std::size_t arms, std::size_t n_bar, std::size_t horizon,
                                const LossOracle& adversary, std::uint64_t policy_seed,
                                const SimulationOptions& options = {}) {
  detail::check_run_args(g, arms, horizon, adversary);
  if (n_bar < g.node_count()) throw Error(ErrorCode::Config, "n_bar must be at least N");
  RunResult result;
  result.setting = Setting::Uninformed;
  result.arms = arms;
  result.horizon = horizon;
  result.n_bar = n_bar;
  result.adversary_seed = adversary.seed();
  result.policy_seed = policy_seed;
  result.bounds_applicable = bounds_regime(arms, horizon);

  Rng rng(policy_seed);
  auto election = compute_centers_uninformed(g, arms, n_bar, horizon, rng);
  result.partition = std::move(election.partition);
  result.setup_steps = election.setup_steps;
  result.luby_failures = election.luby_failures;

  detail::Ledger ledger(result, g.node_count(), arms, options);
  const auto uniform = ActionDistribution::uniform(arms);
  std::vector<double> losses(arms);
  for (std::size_t step = 0; step < result.setup_steps; ++step) {
    adversary.fill_round(step, losses);
    ledger.charge_arms(losses, false);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const Arm action = sample_action(uniform, uniform01(rng));
      ledger.record(PlayRecord{step, v, action, losses[action], Role::Setup, false, uniform.probs()}, losses,
                    false);
    }
  }
  detail::play_policy(g, arms, horizon, adversary, rng, options, ledger, result);
  ledger.finish();
  return result;
}

/// Single agent running plain Exp3 (M = 1, only its own observations).
/// Baseline for measuring the benefit of cooperation.
inline RunResult run_solo_exp3(std::size_t arms, std::size_t horizon, const LossOracle& adversary,
                               std::uint64_t policy_seed, const SimulationOptions& options = {}) {
  require_arms(arms);
  RunResult result;
  result.arms = arms;
  result.horizon = horizon;
  result.adversary_seed = adversary.seed();
  result.policy_seed = policy_seed;
  result.bounds_applicable = bounds_regime(arms, horizon);
  result.partition.centers = {0};
  result.partition.center_of = {0};
  result.partition.origin_of = {0};
  result.partition.delay = {0};
  result.partition.mass = {Mass(1, 0)};

  Rng rng(policy_seed);
  detail::Ledger ledger(result, 1, arms, options);
  Exp3State state(arms, learning_rate(1.0, arms, horizon));
  std::vector<double> losses(arms), estimates(arms);
  for (std::size_t t = 0; t < horizon; ++t) {
    adversary.fill_round(t, losses);
    ledger.charge_arms(losses, true);
    const auto p = state.distribution();
    const Arm action = sample_action(p, uniform01(rng));
    ledger.record(PlayRecord{t, 0, action, losses[action], Role::Center, false, p.probs()}, losses, true);
    for (Arm i = 0; i < arms; ++i)
      estimates[i] = estimated_loss({i, i == action, p[i], losses[i]});
    state = exp3_update(state, estimates);
  }
  ledger.finish();
  return result;
}

}  // namespace coopbandit
