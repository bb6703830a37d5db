#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coopbandit/error.hpp"

namespace coopbandit {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// v's graph neighbors plus v itself, sorted ascending.
struct ClosedNeighborhood {
  NodeId owner = kNoNode;
  std::vector<NodeId> members;

  std::size_t size() const { return members.size(); }
  bool contains(NodeId v) const { return std::binary_search(members.begin(), members.end(), v); }
};

/// Undirected, connected, simple graph over dense ids [0, N).
///
/// Instances are only produced by build_graph (or the helpers below that call
/// it), so every Graph in circulation satisfies the symmetric/simple/connected
/// invariants. The object is immutable after construction.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  /// Open neighborhood (excludes v), sorted ascending.
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }

  /// |N(v)| with v counted.
  std::size_t closed_degree(NodeId v) const { return adjacency_.at(v).size() + 1; }

  ClosedNeighborhood closed_neighborhood(NodeId v) const {
    ClosedNeighborhood out{v, adjacency_.at(v)};
    out.members.insert(std::lower_bound(out.members.begin(), out.members.end(), v), v);
    return out;
  }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& a = adjacency_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u)
      for (NodeId v : adjacency_[u])
        if (u < v) out.push_back({u, v});
    return out;
  }

  friend Graph build_graph(std::span<const Edge> edges, std::size_t node_count);

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

namespace detail {

inline std::vector<std::size_t> bfs_layers(const std::vector<std::vector<NodeId>>& adj,
                                           std::span<const NodeId> sources,
                                           std::size_t max_depth = kUnreachable) {
  std::vector<std::size_t> dist(adj.size(), kUnreachable);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (dist[s] == 0) continue;
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (dist[u] >= max_depth) continue;
    for (NodeId w : adj[u]) {
      if (dist[w] != kUnreachable) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

}  // namespace detail

/// Validates an edge list and returns the graph. Rejects self-loops,
/// duplicate edges (in either orientation), ids outside [0, node_count), and
/// disconnected input.
inline Graph build_graph(std::span<const Edge> edges, std::size_t node_count) {
  if (node_count == 0) throw Error(ErrorCode::Disconnected, "graph must have at least one node");
  Graph g;
  g.adjacency_.assign(node_count, {});
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count)
      throw Error(ErrorCode::NodeOutOfRange, "edge (" + std::to_string(e.u) + "," +
                                                 std::to_string(e.v) + ") outside [0," +
                                                 std::to_string(node_count) + ")");
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.u));
    g.adjacency_[e.u].push_back(e.v);
    g.adjacency_[e.v].push_back(e.u);
  }
  for (NodeId v = 0; v < node_count; ++v) {
    auto& a = g.adjacency_[v];
    std::sort(a.begin(), a.end());
    auto dup = std::adjacent_find(a.begin(), a.end());
    if (dup != a.end())
      throw Error(ErrorCode::DuplicateEdge,
                  "duplicate edge (" + std::to_string(v) + "," + std::to_string(*dup) + ")");
  }
  g.edge_count_ = edges.size();

  const NodeId root = 0;
  auto dist = detail::bfs_layers(g.adjacency_, std::span<const NodeId>(&root, 1));
  auto missing = std::find(dist.begin(), dist.end(), kUnreachable);
  if (missing != dist.end())
    throw Error(ErrorCode::Disconnected, "node " + std::to_string(missing - dist.begin()) +
                                             " not reachable from node 0");
  return g;
}

inline Graph build_graph(std::initializer_list<Edge> edges, std::size_t node_count) {
  return build_graph(std::span<const Edge>(edges.begin(), edges.size()), node_count);
}

/// min over sources of dist(source, v), for every v. Unreachable when
/// `sources` is empty.
inline std::vector<std::size_t> distance_to_set(const Graph& g, std::span<const NodeId> sources,
                                                std::size_t max_depth = kUnreachable) {
  std::vector<std::size_t> dist(g.node_count(), kUnreachable);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (s >= g.node_count()) throw Error(ErrorCode::NodeOutOfRange, "source " + std::to_string(s));
    if (dist[s] == 0) continue;
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    if (dist[u] >= max_depth) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] != kUnreachable) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

/// Hop distances from `source` to every node.
inline std::vector<std::size_t> bfs_from(const Graph& g, NodeId source) {
  return distance_to_set(g, std::span<const NodeId>(&source, 1));
}

inline std::size_t bfs_distance(const Graph& g, NodeId u, NodeId v) {
  if (u >= g.node_count() || v >= g.node_count())
    throw Error(ErrorCode::NodeOutOfRange, "bfs_distance(" + std::to_string(u) + "," +
                                               std::to_string(v) + ")");
  if (u == v) return 0;
  return distance_to_set(g, std::span<const NodeId>(&u, 1))[v];
}

/// Per-source memoized BFS. Owned by the caller so the Graph itself stays
/// immutable and shareable.
class DistanceCache {
 public:
  explicit DistanceCache(const Graph& g) : graph_(&g) {}

  std::size_t distance(NodeId u, NodeId v) { return from(u)[v]; }

  const std::vector<std::size_t>& from(NodeId source) {
    auto it = cache_.find(source);
    if (it == cache_.end())
      it = cache_.emplace(source, distance_to_set(*graph_, std::span<const NodeId>(&source, 1)))
               .first;
    return it->second;
  }

 private:
  const Graph* graph_;
  std::map<NodeId, std::vector<std::size_t>> cache_;
};

/// Sub-graph induced by a node subset. Connectivity is not required; the
/// adjacency of non-members is empty.
struct InducedSubgraph {
  std::vector<bool> member;
  std::vector<std::vector<NodeId>> adjacency;

  std::size_t node_count() const { return static_cast<std::size_t>(std::count(member.begin(), member.end(), true)); }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adjacency) twice += a.size();
    return twice / 2;
  }

  bool has_edge(NodeId u, NodeId v) const {
    return std::binary_search(adjacency[u].begin(), adjacency[u].end(), v);
  }

  /// Hop distances from `source` inside the sub-graph; kUnreachable outside
  /// the source's component.
  std::vector<std::size_t> distances_from(NodeId source) const {
    if (!member.at(source)) return std::vector<std::size_t>(member.size(), kUnreachable);
    return detail::bfs_layers(adjacency, std::span<const NodeId>(&source, 1));
  }

  bool is_connected() const {
    auto first = std::find(member.begin(), member.end(), true);
    if (first == member.end()) return true;
    auto dist = distances_from(static_cast<NodeId>(first - member.begin()));
    for (std::size_t v = 0; v < member.size(); ++v)
      if (member[v] && dist[v] == kUnreachable) return false;
    return true;
  }
};

inline InducedSubgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  InducedSubgraph sub;
  sub.member.assign(g.node_count(), false);
  sub.adjacency.assign(g.node_count(), {});
  for (NodeId v : nodes) {
    if (v >= g.node_count()) throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(v));
    sub.member[v] = true;
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!sub.member[v]) continue;
    for (NodeId w : g.neighbors(v))
      if (sub.member[w]) sub.adjacency[v].push_back(w);
  }
  return sub;
}

/// True iff every distinct pair in `nodes` is at distance >= r + 1.
inline bool is_r_independent(const Graph& g, std::span<const NodeId> nodes, std::size_t r) {
  std::vector<bool> in_set(g.node_count(), false);
  for (NodeId v : nodes) in_set.at(v) = true;
  for (NodeId v : nodes) {
    auto dist = distance_to_set(g, std::span<const NodeId>(&v, 1), r);
    for (NodeId w = 0; w < g.node_count(); ++w)
      if (w != v && in_set[w] && dist[w] <= r) return false;
  }
  return true;
}

/// True iff `candidate` is r-independent and maximal inside (G^r)|universe:
/// every universe node outside the candidate lies within distance r of it.
inline bool is_r_mis(const Graph& g, std::span<const NodeId> candidate,
                     std::span<const NodeId> universe, std::size_t r) {
  std::vector<bool> in_universe(g.node_count(), false);
  for (NodeId v : universe) in_universe.at(v) = true;
  for (NodeId v : candidate)
    if (!in_universe.at(v)) return false;
  if (!is_r_independent(g, candidate, r)) return false;
  auto dist = distance_to_set(g, candidate, r);
  for (NodeId u : universe)
    if (dist[u] > r) return false;
  return true;
}

inline constexpr std::size_t kBruteForceLimit = 30;

/// Size of a maximum independent set. Exponential; only for N <= 30.
inline std::size_t independence_number(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > kBruteForceLimit)
    throw Error(ErrorCode::TooLarge, "independence_number limited to N <= 30, got " + std::to_string(n));
  std::vector<std::uint32_t> closed(n);
  for (NodeId v = 0; v < n; ++v) {
    closed[v] = 1u << v;
    for (NodeId w : g.neighbors(v)) closed[v] |= 1u << w;
  }
  auto degree_in = [&](NodeId v, std::uint32_t mask) {
    return std::popcount(closed[v] & mask) - 1;
  };
  auto solve = [&](auto&& self, std::uint32_t mask) -> std::size_t {
    if (mask == 0) return 0;
    NodeId branch = kNoNode;
    int branch_degree = -1;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      auto v = static_cast<NodeId>(std::countr_zero(rest));
      int d = degree_in(v, mask);
      // Some maximum independent set contains any vertex of degree <= 1.
      if (d <= 1) return 1 + self(self, mask & ~closed[v]);
      if (d > branch_degree) {
        branch = v;
        branch_degree = d;
      }
    }
    return std::max(self(self, mask & ~(1u << branch)), 1 + self(self, mask & ~closed[branch]));
  };
  const std::uint32_t all = n == 32 ? ~0u : ((1u << n) - 1u);
  return solve(solve, all);
}

// Generators ----------------------------------------------------------------

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return build_graph(e, n);
}

/// Hub 0 joined to leaves 1..leaves.
inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.push_back({0, v});
  return build_graph(e, leaves + 1);
}

inline Graph clique_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v});
  return build_graph(e, n);
}

/// Random spanning tree (each node attaches to a uniformly chosen earlier node
/// in a random order) plus every remaining pair independently with
/// probability `extra_edge_probability`.
template <class Rng>
Graph random_connected_graph(std::size_t n, double extra_edge_probability, Rng& rng) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    NodeId a = order[i], b = order[pick(rng)];
    present[a][b] = present[b][a] = true;
    e.push_back({std::min(a, b), std::max(a, b)});
  }
  std::bernoulli_distribution coin(extra_edge_probability);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (!present[u][v] && coin(rng)) e.push_back({u, v});
  return build_graph(e, n);
}

// Edge-list text format -----------------------------------------------------
//
//   N M
//   u v      (M lines, 0-based)
//
// '#' starts a comment that runs to end of line.

inline Graph read_edge_list(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::string>> content;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    content.emplace_back(line_no, raw);
  }
  if (content.empty()) throw Error(ErrorCode::Parse, "empty edge list");

  auto parse_pair = [](const std::pair<std::size_t, std::string>& line, long long& a, long long& b) {
    std::istringstream ss(line.second);
    std::string extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw Error(ErrorCode::Parse, "line " + std::to_string(line.first) + ": expected two integers");
  };
  long long n = 0, m = 0;
  parse_pair(content.front(), n, m);
  if (n <= 0 || m < 0) throw Error(ErrorCode::Parse, "header must be 'N M' with N > 0, M >= 0");
  if (content.size() - 1 != static_cast<std::size_t>(m))
    throw Error(ErrorCode::Parse, "header declares " + std::to_string(m) + " edges, found " +
                                      std::to_string(content.size() - 1));
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::size_t i = 1; i < content.size(); ++i) {
    long long a = 0, b = 0;
    parse_pair(content[i], a, b);
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw Error(ErrorCode::NodeOutOfRange, "line " + std::to_string(content[i].first) +
                                                 ": node id outside [0," + std::to_string(n) + ")");
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
  }
  return build_graph(edges, static_cast<std::size_t>(n));
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace coopbandit
