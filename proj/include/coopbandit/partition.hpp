#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "coopbandit/bounds.hpp"
#include "coopbandit/error.hpp"
#include "coopbandit/graph.hpp"
#include "coopbandit/mass.hpp"

namespace coopbandit {

/// Assignment of every agent to a component. Centers map to themselves with
/// delay 0. Unreached agents carry kNoNode / nil mass / kUnreachable delay;
/// validate_partition reports them.
struct Partition {
  std::vector<NodeId> centers;  // sorted
  std::vector<NodeId> center_of;
  std::vector<NodeId> origin_of;
  std::vector<std::size_t> delay;
  std::vector<Mass> mass;

  std::size_t node_count() const { return center_of.size(); }
  bool is_center(NodeId v) const { return center_of[v] == v; }

  std::vector<NodeId> component(NodeId center) const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < center_of.size(); ++v)
      if (center_of[v] == center) out.push_back(v);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// One broadcast message of the components protocol: <v, t, C_t(v), M_t(v)>.
struct ComponentsMessage {
  NodeId sender = kNoNode;
  std::size_t step = 0;
  NodeId center = kNoNode;
  Mass mass;
};

/// Per-agent state at one iteration of the components protocol.
struct ComponentsSnapshot {
  std::vector<NodeId> center;
  std::vector<NodeId> origin;
  std::vector<Mass> mass;
};

struct ComponentsResult {
  std::vector<NodeId> center_of;
  std::vector<NodeId> origin_of;
  std::vector<Mass> mass;
  /// snapshots[t] holds (C_t, U_t, M_t) for t = 0 .. Theta_K + 1.
  std::vector<ComponentsSnapshot> snapshots;
  /// Communication steps consumed: Theta_K + 1.
  std::size_t steps = 0;
};

/// Grows components around `centers` by synchronous mass propagation.
///
/// Each center starts with mass (min{|N(c)|,K}, 0). For t = 0 .. Theta_K every
/// agent broadcasts (C_t, M_t); a non-center whose origin is not yet a center
/// re-selects the neighbor of largest M_t (lowest id on ties), adopts its
/// center and one-hop-decayed mass. Agents freeze once their origin is a
/// center. An agent seeing only nil masses stays nil.
inline ComponentsResult centers_to_components(const Graph& g, std::span<const NodeId> centers,
                                              std::size_t arms) {
  require_arms(arms);
  if (centers.empty()) throw Error(ErrorCode::EmptyCenterSet, "centers_to_components needs a center");
  const std::size_t n = g.node_count();
  std::vector<bool> is_center(n, false);
  for (NodeId c : centers) is_center.at(c) = true;

  ComponentsSnapshot state{std::vector<NodeId>(n, kNoNode), std::vector<NodeId>(n, kNoNode),
                           std::vector<Mass>(n)};
  for (NodeId c = 0; c < n; ++c) {
    if (!is_center[c]) continue;
    state.center[c] = c;
    state.origin[c] = c;
    state.mass[c] = Mass(static_cast<std::uint32_t>(capped_degree(g.closed_degree(c), arms)), 0);
  }

  ComponentsResult result;
  const std::size_t last = components_iterations(arms);
  result.snapshots.reserve(last + 2);
  result.snapshots.push_back(state);

  std::vector<ComponentsMessage> outbox(n);
  for (std::size_t t = 0; t <= last; ++t) {
    for (NodeId v = 0; v < n; ++v) outbox[v] = {v, t, state.center[v], state.mass[v]};

    ComponentsSnapshot next = state;
    for (NodeId v = 0; v < n; ++v) {
      const NodeId origin = state.origin[v];
      if (origin != kNoNode && is_center[origin]) continue;
      const ComponentsMessage* best = nullptr;
      for (NodeId w : g.neighbors(v)) {
        const ComponentsMessage& msg = outbox[w];
        if (best == nullptr || msg.mass > best->mass) best = &msg;
      }
      if (best == nullptr || best->mass.is_nil()) {
        next.origin[v] = kNoNode;
        next.center[v] = kNoNode;
        next.mass[v] = Mass::nil();
      } else {
        next.origin[v] = best->sender;
        next.center[v] = best->center;
        next.mass[v] = best->mass.decayed();
      }
    }
    state = std::move(next);
    result.snapshots.push_back(state);
  }

  result.center_of = state.center;
  result.origin_of = state.origin;
  result.mass = state.mass;
  result.steps = last + 1;
  return result;
}

/// Builds the Partition from a components run, computing each agent's delay
/// as its hop distance to its center inside the induced component.
inline Partition make_partition(const Graph& g, std::span<const NodeId> centers, const ComponentsResult& comps) {
  const std::size_t n = g.node_count();
  Partition p;
  p.centers.assign(centers.begin(), centers.end());
  std::sort(p.centers.begin(), p.centers.end());
  p.center_of = comps.center_of;
  p.origin_of = comps.origin_of;
  p.mass = comps.mass;
  p.delay.assign(n, kUnreachable);
  for (NodeId c : p.centers) {
    auto members = p.component(c);
    auto dist = induced_subgraph(g, members).distances_from(c);
    for (NodeId v : members) p.delay[v] = dist[v];
  }
  return p;
}

/// Multi-source BFS distance from every agent to the nearest center.
inline std::vector<std::size_t> distance_to_centers(const Graph& g, std::span<const NodeId> centers) {
  return distance_to_set(g, centers);
}

struct InformedTrace {
  std::vector<NodeId> selection_order;
  std::vector<std::size_t> unsatisfied_counts;  // |S_t| for t = 0, 1, ...
};

/// Greedy center election with full knowledge of the graph.
///
/// While some agent is unsatisfied (mass below min{|N(v)|,K} and at distance
/// >= 3 from every center) the unsatisfied agent with the largest closed
/// degree (lowest id on ties) becomes a center and components are recomputed.
inline std::vector<NodeId> compute_centers_informed(const Graph& g, std::size_t arms,
                                                    InformedTrace* trace = nullptr) {
  require_arms(arms);
  const std::size_t n = g.node_count();
  std::vector<NodeId> centers;
  std::vector<NodeId> unsatisfied(n);
  for (NodeId v = 0; v < n; ++v) unsatisfied[v] = v;

  while (!unsatisfied.empty()) {
    if (trace) trace->unsatisfied_counts.push_back(unsatisfied.size());
    NodeId chosen = unsatisfied.front();
    for (NodeId v : unsatisfied)
      if (g.closed_degree(v) > g.closed_degree(chosen)) chosen = v;
    centers.push_back(chosen);
    if (trace) trace->selection_order.push_back(chosen);

    const auto comps = centers_to_components(g, centers, arms);
    const auto dist = distance_to_centers(g, centers);
    unsatisfied.clear();
    for (NodeId v = 0; v < n; ++v) {
      const Mass target(static_cast<std::uint32_t>(capped_degree(g.closed_degree(v), arms)), 0);
      if (comps.mass[v] < target && dist[v] >= 3) unsatisfied.push_back(v);
    }
  }
  if (trace) trace->unsatisfied_counts.push_back(0);
  std::sort(centers.begin(), centers.end());
  return centers;
}

/// compute_centers_informed followed by the components pass.
inline Partition partition_informed(const Graph& g, std::size_t arms) {
  const auto centers = compute_centers_informed(g, arms);
  return make_partition(g, centers, centers_to_components(g, centers, arms));
}

}  // namespace coopbandit
