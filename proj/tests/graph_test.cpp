#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "coopbandit/graph.hpp"
#include "coopbandit/random.hpp"

using namespace coopbandit;

namespace {

std::vector<std::vector<std::size_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kUnreachable));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] != kUnreachable && d[k][j] != kUnreachable) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

std::vector<NodeId> members_of(std::uint32_t mask) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < 32; ++v)
    if (mask >> v & 1u) out.push_back(v);
  return out;
}

bool independent_at(const std::vector<std::vector<std::size_t>>& d, std::uint32_t mask, std::size_t r) {
  const auto nodes = members_of(mask);
  for (NodeId a : nodes)
    for (NodeId b : nodes)
      if (a < b && d[a][b] <= r) return false;
  return true;
}

// Maximal iff no universe node outside the candidate can be added while
// keeping r-independence; checked over every strict superset.
bool exhaustive_r_mis(const Graph& g, std::uint32_t candidate, std::uint32_t universe, std::size_t r) {
  const auto d = floyd_warshall(g);
  if ((candidate & ~universe) != 0 || !independent_at(d, candidate, r)) return false;
  const std::uint32_t extra = universe & ~candidate;
  for (std::uint32_t sub = extra; sub != 0; sub = (sub - 1) & extra)
    if (independent_at(d, candidate | sub, r)) return false;
  return true;
}

std::size_t exhaustive_alpha(const Graph& g) {
  const auto d = floyd_warshall(g);
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << g.node_count()); ++mask)
    if (independent_at(d, mask, 1)) best = std::max<std::size_t>(best, members_of(mask).size());
  return best;
}

}  // namespace

TEST(BuildGraph, SmallestConnectedGraph) {
  const Graph g = build_graph({{0, 1}}, 2);
  EXPECT_EQ(g.node_count(), 2u);
  ASSERT_EQ(g.neighbors(0).size(), 1u);
  EXPECT_EQ(g.neighbors(0)[0], 1u);
  EXPECT_EQ(g.closed_degree(0), 2u);
}

TEST(BuildGraph, Triangle) {
  const Graph g = build_graph({{0, 1}, {1, 2}, {0, 2}}, 3);
  EXPECT_EQ(g.edge_count(), 3u);
  for (NodeId v = 0; v < 3; ++v) EXPECT_EQ(g.closed_degree(v), 3u);
  EXPECT_EQ(g.closed_neighborhood(1).members, (std::vector<NodeId>{0, 1, 2}));
}

TEST(BuildGraph, RejectsInvalidInput) {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Config;
  };
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {2, 3}}, 4); }), ErrorCode::Disconnected);
  EXPECT_EQ(code_of([] { build_graph({{0, 0}, {0, 1}}, 2); }), ErrorCode::SelfLoop);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 0}}, 2); }), ErrorCode::DuplicateEdge);
  EXPECT_EQ(code_of([] { build_graph({{0, 5}}, 2); }), ErrorCode::NodeOutOfRange);
}

TEST(BuildGraph, AdjacencyIsSymmetric) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const Graph g = random_connected_graph(15, 0.2, rng);
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (NodeId w : g.neighbors(v)) EXPECT_TRUE(g.has_edge(w, v));
  }
}

TEST(Distance, Examples) {
  const Graph path = path_graph(5);
  EXPECT_EQ(bfs_distance(path, 0, 4), 4u);
  EXPECT_EQ(bfs_distance(path, 3, 3), 0u);
  const Graph tri = clique_graph(3);
  EXPECT_EQ(bfs_distance(tri, 0, 2), 1u);
}

TEST(Distance, MatchesFloydWarshallAndIsAMetric) {
  Rng rng(11);
  for (int i = 0; i < 40; ++i) {
    const Graph g = random_connected_graph(3 + i % 12, 0.15, rng);
    const auto fw = floyd_warshall(g);
    DistanceCache cache(g);
    const std::size_t n = g.node_count();
    for (NodeId u = 0; u < n; ++u) {
      EXPECT_EQ(bfs_from(g, u), fw[u]);
      for (NodeId v = 0; v < n; ++v) {
        EXPECT_EQ(cache.distance(u, v), cache.distance(v, u));
        for (NodeId w = 0; w < n; ++w) EXPECT_LE(cache.distance(u, w), cache.distance(u, v) + cache.distance(v, w));
      }
    }
  }
}

TEST(Distance, MultiSourceRespectsDepthLimit) {
  const Graph g = path_graph(7);
  const std::vector<NodeId> sources{0, 6};
  const auto d = distance_to_set(g, sources, 2);
  EXPECT_EQ(d[1], 1u);
  EXPECT_EQ(d[5], 1u);
  EXPECT_EQ(d[2], 2u);
  EXPECT_EQ(d[3], kUnreachable);
}

TEST(InducedSubgraph, Examples) {
  const Graph tri = clique_graph(3);
  const std::vector<NodeId> pair{0, 1};
  const auto sub = induced_subgraph(tri, pair);
  EXPECT_EQ(sub.node_count(), 2u);
  EXPECT_EQ(sub.edge_count(), 1u);
  EXPECT_TRUE(sub.has_edge(0, 1));

  const std::vector<NodeId> all{0, 1, 2};
  EXPECT_EQ(induced_subgraph(tri, all).edge_count(), tri.edge_count());

  const Graph path = path_graph(3);
  const std::vector<NodeId> ends{0, 2};
  const auto apart = induced_subgraph(path, ends);
  EXPECT_EQ(apart.edge_count(), 0u);
  EXPECT_FALSE(apart.is_connected());
  EXPECT_EQ(apart.distances_from(0)[2], kUnreachable);
}

TEST(Independence, PathExamples) {
  const Graph path = path_graph(5);
  EXPECT_TRUE(is_r_independent(path, std::vector<NodeId>{0, 3}, 2));
  EXPECT_FALSE(is_r_independent(path, std::vector<NodeId>{0, 2}, 2));
  for (NodeId v = 0; v < 5; ++v)
    for (std::size_t r = 0; r < 5; ++r) EXPECT_TRUE(is_r_independent(path, std::vector<NodeId>{v}, r));
}

TEST(Independence, RadiusOneMeansNoInternalEdge) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Graph g = random_connected_graph(10, 0.3, rng);
    std::vector<NodeId> s;
    for (NodeId v = 0; v < 10; ++v)
      if (uniform01(rng) < 0.4) s.push_back(v);
    bool no_edge = true;
    for (NodeId a : s)
      for (NodeId b : s) no_edge = no_edge && !g.has_edge(a, b);
    EXPECT_EQ(is_r_independent(g, s, 1), no_edge);
  }
}

TEST(IsRMis, PathExamplesAgainstExhaustiveOracle) {
  const Graph path = path_graph(5);
  const std::vector<NodeId> all{0, 1, 2, 3, 4};
  EXPECT_TRUE(is_r_mis(path, std::vector<NodeId>{0, 3}, all, 2));
  EXPECT_TRUE(exhaustive_r_mis(path, 0b01001, 0b11111, 2));
  EXPECT_FALSE(is_r_mis(path, std::vector<NodeId>{0}, all, 2));
  EXPECT_FALSE(exhaustive_r_mis(path, 0b00001, 0b11111, 2));
  EXPECT_TRUE(is_r_mis(path, std::vector<NodeId>{2}, std::vector<NodeId>{2}, 2));
}

TEST(IsRMis, AgreesWithExhaustiveCheckOnRandomGraphs) {
  Rng rng(17);
  for (int i = 0; i < 150; ++i) {
    const Graph g = random_connected_graph(2 + i % 10, uniform01(rng) * 0.5, rng);
    const std::size_t n = g.node_count();
    for (std::size_t r = 1; r <= 2; ++r) {
      std::uint32_t universe = 0, candidate = 0;
      for (NodeId v = 0; v < n; ++v) {
        if (uniform01(rng) < 0.8) universe |= 1u << v;
        if ((universe >> v & 1u) && uniform01(rng) < 0.35) candidate |= 1u << v;
      }
      EXPECT_EQ(is_r_mis(g, members_of(candidate), members_of(universe), r),
                exhaustive_r_mis(g, candidate, universe, r))
          << "n=" << n << " r=" << r << " candidate=" << candidate << " universe=" << universe;
    }
  }
}

TEST(IndependenceNumber, Examples) {
  EXPECT_EQ(independence_number(clique_graph(5)), 1u);
  EXPECT_EQ(independence_number(path_graph(5)), exhaustive_alpha(path_graph(5)));
  EXPECT_EQ(independence_number(path_graph(5)), 3u);
  EXPECT_EQ(independence_number(star_graph(6)), 6u);
}

TEST(IndependenceNumber, MatchesSubsetEnumeration) {
  Rng rng(23);
  for (int i = 0; i < 80; ++i) {
    const Graph g = random_connected_graph(1 + i % 14, uniform01(rng), rng);
    EXPECT_EQ(independence_number(g), exhaustive_alpha(g));
  }
}

TEST(IndependenceNumber, GuardedAboveThirty) {
  EXPECT_NO_THROW(independence_number(path_graph(30)));
  EXPECT_THROW(independence_number(path_graph(31)), Error);
}

TEST(EdgeList, ParsesCommentsAndRoundTrips) {
  std::istringstream in("# triangle\n3 3\n0 1  # first\n1 2\n\n0 2\n");
  const Graph g = read_edge_list(in);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
  std::stringstream io;
  write_edge_list(io, g);
  const Graph back = read_edge_list(io);
  EXPECT_EQ(back.edges(), g.edges());
}

TEST(EdgeList, RejectsMalformedInput) {
  auto code_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_edge_list(in);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Config;
  };
  EXPECT_EQ(code_of(""), ErrorCode::Parse);
  EXPECT_EQ(code_of("3 2\n0 1\n"), ErrorCode::Parse);
  EXPECT_EQ(code_of("2 1\n0 x\n"), ErrorCode::Parse);
  EXPECT_EQ(code_of("2 1\n0 1 2\n"), ErrorCode::Parse);
  EXPECT_EQ(code_of("2 1\n0 2\n"), ErrorCode::NodeOutOfRange);
  EXPECT_EQ(code_of("4 2\n0 1\n2 3\n"), ErrorCode::Disconnected);
}
