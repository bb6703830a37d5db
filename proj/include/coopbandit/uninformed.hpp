#pragma once

#include <cstddef>
#include <vector>

#include "coopbandit/bounds.hpp"
#include "coopbandit/graph.hpp"
#include "coopbandit/luby.hpp"
#include "coopbandit/partition.hpp"
#include "coopbandit/random.hpp"

namespace coopbandit {

struct ElectionIteration {
  std::size_t index = 0;             // t = 0 .. K-1
  std::vector<NodeId> universe;      // S_t
  LubyTranscript luby;
  std::vector<NodeId> centers_after; // C_t, ascending
  std::size_t steps = 0;             // steps charged for this iteration
};

struct UninformedResult {
  std::vector<NodeId> centers;
  Partition partition;
  std::vector<ElectionIteration> iterations;
  /// Every step of the protocol, including the final components pass.
  std::size_t setup_steps = 0;
  std::size_t luby_round_budget = 0;
  /// Luby calls that ended with participants left (non-maximal output).
  std::size_t luby_failures = 0;
};

/// Distributed center election when agents only know their neighbors and an
/// upper bound n_bar on the number of agents.
///
/// For t = 0 .. K-1 the still-unsatisfied agents whose capped degree equals
/// K - t run Luby for a fixed budget of ceil(3 ln(n_bar sqrt(KT))) rounds
/// (4 steps each); joiners become centers; then the components protocol runs
/// (Theta_K + 1 steps) and each agent recomputes whether it is unsatisfied:
/// mass below its capped degree and no center within distance 2, read off as
/// C_2(v) == nil in the components transcript. A last components pass fixes
/// the partition the policy uses.
///
/// Step charges use the full budgets: agents cannot tell that a Luby call
/// finished early.
inline UninformedResult compute_centers_uninformed(const Graph& g, std::size_t arms, std::size_t n_bar,
                                                   std::size_t horizon, Rng& rng) {
  require_arms(arms);
  const std::size_t n = g.node_count();
  if (n_bar < n) throw Error(ErrorCode::Config, "n_bar must be at least the number of agents");
  if (horizon == 0) throw Error(ErrorCode::Config, "horizon must be positive");

  UninformedResult out;
  out.luby_round_budget = uninformed_luby_rounds(arms, n_bar, horizon);
  const std::size_t luby_steps = kLubyStepsPerRound * out.luby_round_budget;
  const std::size_t comp_steps = components_steps(arms);

  std::vector<bool> unsatisfied(n, true);
  std::vector<NodeId> centers;

  for (std::size_t t = 0; t < arms; ++t) {
    ElectionIteration it;
    it.index = t;
    for (NodeId v = 0; v < n; ++v)
      if (unsatisfied[v] && capped_degree(g.closed_degree(v), arms) == arms - t) it.universe.push_back(v);

    it.luby = luby_2mis(g, it.universe, out.luby_round_budget, rng);
    if (!it.luby.leftover.empty()) ++out.luby_failures;
    centers.insert(centers.end(), it.luby.joined.begin(), it.luby.joined.end());
    std::sort(centers.begin(), centers.end());
    it.centers_after = centers;

    if (!centers.empty()) {
      const auto comps = centers_to_components(g, centers, arms);
      const auto& second = comps.snapshots.at(2).center;
      for (NodeId v = 0; v < n; ++v) {
        const Mass target(static_cast<std::uint32_t>(capped_degree(g.closed_degree(v), arms)), 0);
        unsatisfied[v] = comps.mass[v] < target && second[v] == kNoNode;
      }
    }
    // With no centers yet every agent stays unsatisfied.
    it.steps = luby_steps + comp_steps;
    out.setup_steps += it.steps;
    out.iterations.push_back(std::move(it));
  }

  out.centers = centers;
  if (centers.empty()) {
    // Only possible when the Luby budget is exhausted with nobody joining.
    out.partition.center_of.assign(n, kNoNode);
    out.partition.origin_of.assign(n, kNoNode);
    out.partition.delay.assign(n, kUnreachable);
    out.partition.mass.assign(n, Mass::nil());
  } else {
    out.partition = make_partition(g, centers, centers_to_components(g, centers, arms));
  }
  out.setup_steps += comp_steps;
  return out;
}

}  // namespace coopbandit
