#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "coopbandit/graph.hpp"
#include "coopbandit/random.hpp"

namespace coopbandit {

struct LubyTranscript {
  std::size_t rounds_used = 0;
  std::vector<NodeId> joined;  // ascending
  std::size_t step_cost = 0;   // 4 per executed round
  /// Participants left when the round budget ran out. Non-empty exactly when
  /// `joined` is not maximal in the universe.
  std::vector<NodeId> leftover;
};

namespace detail {

struct LubyBid {
  double value = -1.0;
  NodeId owner = kNoNode;

  bool beats(const LubyBid& other) const {
    if (other.owner == kNoNode) return owner != kNoNode;
    return value > other.value || (value == other.value && owner < other.owner);
  }
};

}  // namespace detail

/// Luby's algorithm on (G^2) restricted to `universe`, simulated as the
/// four-step neighbor relay:
///   1. participants broadcast a uniform draw,
///   2. every agent relays the best draw in its closed neighborhood,
///   3. a participant whose draw beats every relayed draw joins,
///   4. agents adjacent to a joiner announce it; participants hearing such an
///      announcement in their closed neighborhood stop.
/// Distance-2 information therefore flows only through common neighbors.
/// Draws are taken in ascending id order from `rng`; equal draws go to the
/// lower id.
inline LubyTranscript luby_2mis(const Graph& g, std::span<const NodeId> universe, std::size_t max_rounds,
                                Rng& rng) {
  using detail::LubyBid;
  const std::size_t n = g.node_count();
  std::vector<bool> participating(n, false);
  for (NodeId v : universe) participating.at(v) = true;
  std::size_t remaining = 0;
  for (bool b : participating) remaining += b;

  LubyTranscript out;
  std::vector<LubyBid> draw(n), relay(n);
  std::vector<bool> joined_now(n), neighbor_joined(n);

  auto for_closed = [&](NodeId v, auto&& f) {
    f(v);
    for (NodeId w : g.neighbors(v)) f(w);
  };

  while (remaining > 0 && out.rounds_used < max_rounds) {
    ++out.rounds_used;
    // Step 1: draws.
    for (NodeId v = 0; v < n; ++v) draw[v] = participating[v] ? LubyBid{uniform01(rng), v} : LubyBid{};
    // Step 2: best participant draw in each closed neighborhood.
    for (NodeId v = 0; v < n; ++v) {
      LubyBid best;
      for_closed(v, [&](NodeId w) {
        if (draw[w].beats(best)) best = draw[w];
      });
      relay[v] = best;
    }
    // Step 3: join when no relayed draw beats our own.
    for (NodeId v = 0; v < n; ++v) {
      joined_now[v] = false;
      if (!participating[v]) continue;
      LubyBid best;
      for_closed(v, [&](NodeId w) {
        if (relay[w].beats(best)) best = relay[w];
      });
      joined_now[v] = best.owner == v;
    }
    // Step 4: neighbor-joined relay.
    for (NodeId v = 0; v < n; ++v) {
      bool any = false;
      for_closed(v, [&](NodeId w) { any = any || joined_now[w]; });
      neighbor_joined[v] = any;
    }
    for (NodeId v = 0; v < n; ++v) {
      if (joined_now[v]) out.joined.push_back(v);
      if (!participating[v]) continue;
      bool stop = false;
      for_closed(v, [&](NodeId w) { stop = stop || neighbor_joined[w]; });
      if (stop) {
        participating[v] = false;
        --remaining;
      }
    }
  }
  std::sort(out.joined.begin(), out.joined.end());
  for (NodeId v = 0; v < n; ++v)
    if (participating[v]) out.leftover.push_back(v);
  out.step_cost = 4 * out.rounds_used;
  return out;
}

}  // namespace coopbandit
