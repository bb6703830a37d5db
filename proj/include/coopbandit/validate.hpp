#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "coopbandit/bounds.hpp"
#include "coopbandit/graph.hpp"
#include "coopbandit/partition.hpp"

namespace coopbandit {

struct PropertyCheck {
  std::string name;
  bool passed = true;
  std::string witness;  // first counterexample, empty on pass
};

struct ValidationReport {
  std::vector<PropertyCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const PropertyCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline std::string node_str(NodeId v) { return v == kNoNode ? std::string("nil") : std::to_string(v); }

}  // namespace detail

/// Structural checks on a partition:
///   disjoint_cover          every agent has exactly one center, centers own themselves
///   center_neighborhood     N(c) lies inside V_c
///   component_connected     each induced component is connected
///   mass_recurrence         M(v) == (min{|N(C(v))|,K}, d(v)) exactly
///   origin_minimal          U(v) is a neighbor in V_C(v) with the smallest delay, d(U(v)) = d(v) - 1
///   centers_2_independent   pairwise center distance >= 3
///   mass_lower_bound        M(v) >= e^{-1} min{|N(v)|,K}
///   center_distance_bound   every agent within 6 ln K - 1 of a center
inline ValidationReport validate_partition(const Graph& g, const Partition& p, std::size_t arms) {
  const std::size_t n = g.node_count();
  ValidationReport report;
  auto add = [&](std::string name) -> PropertyCheck& {
    report.checks.push_back({std::move(name), true, {}});
    return report.checks.back();
  };
  auto fail = [](PropertyCheck& c, std::string witness) {
    if (c.passed) {
      c.passed = false;
      c.witness = std::move(witness);
    }
  };
  using detail::node_str;

  std::vector<bool> is_center(n, false);
  for (NodeId c : p.centers) {
    if (c < n) is_center[c] = true;
  }

  auto& cover = add("disjoint_cover");
  if (p.center_of.size() != n || p.origin_of.size() != n || p.delay.size() != n || p.mass.size() != n)
    fail(cover, "per-agent arrays do not have N entries");
  if (p.centers.empty()) fail(cover, "no centers");
  for (NodeId c : p.centers)
    if (c >= n) fail(cover, "center id " + std::to_string(c) + " out of range");
  if (!cover.passed) return report;  // later checks index the arrays
  for (NodeId v = 0; v < n; ++v) {
    const NodeId c = p.center_of[v];
    if (c == kNoNode || c >= n || !is_center[c])
      fail(cover, "agent " + std::to_string(v) + " has center " + node_str(c));
    else if (is_center[v] && c != v)
      fail(cover, "center " + std::to_string(v) + " assigned to " + std::to_string(c));
  }

  auto& hood = add("center_neighborhood");
  for (NodeId c : p.centers)
    for (NodeId w : g.neighbors(c))
      if (p.center_of[w] != c)
        fail(hood, "neighbor " + std::to_string(w) + " of center " + std::to_string(c) + " is in component of " +
                       node_str(p.center_of[w]));

  auto& connected = add("component_connected");
  std::vector<std::size_t> component_dist(n, kUnreachable);
  for (NodeId c : p.centers) {
    auto members = p.component(c);
    auto dist = induced_subgraph(g, members).distances_from(c);
    for (NodeId v : members) {
      component_dist[v] = dist[v];
      if (dist[v] == kUnreachable)
        fail(connected, "agent " + std::to_string(v) + " disconnected from center " + std::to_string(c));
    }
  }

  auto& recurrence = add("mass_recurrence");
  for (NodeId v = 0; v < n; ++v) {
    const NodeId c = p.center_of[v];
    if (c == kNoNode || c >= n) {
      fail(recurrence, "agent " + std::to_string(v) + " unassigned");
      continue;
    }
    if (p.delay[v] != component_dist[v]) {
      fail(recurrence, "agent " + std::to_string(v) + " delay " + std::to_string(p.delay[v]) +
                           " but component distance " + std::to_string(component_dist[v]));
      continue;
    }
    const Mass expected(static_cast<std::uint32_t>(capped_degree(g.closed_degree(c), arms)),
                        static_cast<std::uint32_t>(p.delay[v]));
    if (p.mass[v] != expected)
      fail(recurrence, "agent " + std::to_string(v) + " mass " + p.mass[v].to_string() + " expected " +
                           expected.to_string());
  }

  auto& origin = add("origin_minimal");
  for (NodeId v = 0; v < n; ++v) {
    const NodeId c = p.center_of[v];
    const NodeId u = p.origin_of[v];
    if (is_center[v]) {
      if (u != v) fail(origin, "center " + std::to_string(v) + " has origin " + node_str(u));
      continue;
    }
    if (u == kNoNode || u >= n || !g.has_edge(v, u) || p.center_of[u] != c) {
      fail(origin, "agent " + std::to_string(v) + " origin " + node_str(u) + " not a neighbor in its component");
      continue;
    }
    std::size_t best = kUnreachable;
    for (NodeId w : g.neighbors(v))
      if (p.center_of[w] == c) best = std::min(best, p.delay[w]);
    if (p.delay[u] != best || p.delay[u] + 1 != p.delay[v])
      fail(origin, "agent " + std::to_string(v) + " origin " + std::to_string(u) + " delay " +
                       std::to_string(p.delay[u]) + ", best neighbor delay " + std::to_string(best));
  }

  auto& independent = add("centers_2_independent");
  for (NodeId c : p.centers) {
    auto dist = distance_to_set(g, std::span<const NodeId>(&c, 1), 2);
    for (NodeId d : p.centers)
      if (d > c && dist[d] <= 2) {
        fail(independent, "centers " + std::to_string(c) + " and " + std::to_string(d) + " at distance " +
                              std::to_string(dist[d]));
      }
  }

  auto& lower = add("mass_lower_bound");
  for (NodeId v = 0; v < n; ++v) {
    const long double cap = static_cast<long double>(capped_degree(g.closed_degree(v), arms));
    const long double need = 6.0L * std::log(cap) - 6.0L;
    if (p.mass[v].is_nil() || p.mass[v].log_score() < need)
      fail(lower, "agent " + std::to_string(v) + " mass " + p.mass[v].to_string() + " below e^-1 * " +
                      std::to_string(static_cast<int>(cap)));
  }

  auto& reach = add("center_distance_bound");
  const double limit = 6.0 * std::log(static_cast<double>(arms)) - 1.0;
  const auto dist = distance_to_set(g, p.centers);
  for (NodeId v = 0; v < n; ++v)
    if (static_cast<double>(dist[v]) > limit)
      fail(reach, "agent " + std::to_string(v) + " at distance " + std::to_string(dist[v]) + " > " +
                      std::to_string(limit));

  return report;
}

}  // namespace coopbandit
