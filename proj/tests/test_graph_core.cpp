#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "forge/graph/enumerate.hpp"
#include "forge/graph/json.hpp"
#include "forge/graph/search.hpp"

using namespace forge;

namespace {

// Naive oracles: try every map.
std::uint64_t count_automorphisms_naive(const Graph& g) {
  std::vector<int> p(static_cast<std::size_t>(g.n()));
  std::iota(p.begin(), p.end(), 0);
  std::uint64_t count = 0;
  do {
    if (is_embedding(g, g, VertexMap{p})) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

std::optional<VertexMap> first_embedding_naive(const Graph& g, const Graph& h) {
  std::vector<int> m(static_cast<std::size_t>(g.n()), 0);
  if (g.n() == 0) return VertexMap{};
  for (;;) {
    if (is_embedding(g, h, VertexMap{m})) return VertexMap{m};
    int k = g.n() - 1;
    while (k >= 0 && m[static_cast<std::size_t>(k)] == h.n() - 1) m[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return std::nullopt;
    ++m[static_cast<std::size_t>(k)];
  }
}

bool has_epimorphism_naive(const Graph& h, const Graph& hp) {
  if (hp.n() == 0) return h.n() == 0;
  std::vector<int> m(static_cast<std::size_t>(hp.n()), 0);
  if (h.n() == 0) return false;
  for (;;) {
    if (is_epimorphism(h, hp, VertexMap{m})) return true;
    int k = hp.n() - 1;
    while (k >= 0 && m[static_cast<std::size_t>(k)] == h.n() - 1) m[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return false;
    ++m[static_cast<std::size_t>(k)];
  }
}

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

}  // namespace

TEST(Graph, RejectsSelfLoopsAndKeepsCanonicalEdges) {
  Graph g(3);
  EXPECT_THROW(g.add_edge(1, 1), PreconditionError);
  g.add_edge(2, 0);
  g.add_edge(1, 0);
  EXPECT_EQ(g.edges(), (std::vector<std::pair<int, int>>{{0, 1}, {0, 2}}));
}

TEST(IsEmbedding, Examples) {
  EXPECT_TRUE(is_embedding(cycle_graph(5), cycle_graph(5), identity_map(5)));
  EXPECT_FALSE(is_embedding(path_graph(3), complete_graph(3), VertexMap{{0, 1, 2}}));
  EXPECT_TRUE(is_embedding(path_graph(2), path_graph(3), VertexMap{{0, 1}}));
  EXPECT_FALSE(is_embedding(path_graph(2), path_graph(3), VertexMap{{1, 1}}));
  EXPECT_THROW(is_embedding(path_graph(2), path_graph(3), VertexMap{{0, 3}}), MalformedInput);
}

TEST(FindEmbedding, Examples) {
  EXPECT_EQ(find_embedding(Graph(0), cycle_graph(4)), VertexMap{});
  EXPECT_FALSE(find_embedding(complete_graph(3), path_graph(5)).has_value());
  // Leaves of K_{1,3} are 1..3, center 0.
  auto m = find_embedding(path_graph(3), star_graph(3));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->image, (std::vector<int>{1, 0, 2}));
}

TEST(FindEmbedding, LexLeastAgreesWithNaiveOnRandomPairs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = random_graph(1 + static_cast<int>(rng() % 4), 0.5, rng);
    Graph h = random_graph(1 + static_cast<int>(rng() % 6), 0.5, rng);
    auto fast = find_embedding(g, h);
    auto slow = first_embedding_naive(g, h);
    ASSERT_EQ(fast.has_value(), slow.has_value());
    if (fast) {
      EXPECT_EQ(*fast, *slow);
      EXPECT_TRUE(is_embedding(g, h, *fast));
    }
  }
}

TEST(FindEmbedding, ReflexiveAndTransitiveOnSmallCorpus) {
  auto corpus = graphs_up_to_iso_upto(4);
  for (const auto& g : corpus) {
    auto self = find_embedding(g, g);
    ASSERT_TRUE(self.has_value());
  }
  for (const auto& a : corpus)
    for (const auto& b : corpus) {
      auto f = find_embedding(a, b);
      if (!f) continue;
      for (const auto& c : corpus) {
        auto g = find_embedding(b, c);
        if (!g) continue;
        EXPECT_TRUE(is_embedding(a, c, compose(*f, *g)));
      }
    }
}

TEST(Automorphisms, Examples) {
  EXPECT_EQ(automorphisms(Graph(3)).order, 6u);
  EXPECT_EQ(automorphisms(path_graph(3)).order, 2u);
  Graph rigid(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {4, 5}, {1, 5}});
  // Whether or not this particular graph is rigid, order and generators must agree.
  auto group = automorphisms(rigid);
  EXPECT_EQ(group.order, count_automorphisms_naive(rigid));
  if (group.order == 1) {
    EXPECT_TRUE(group.generators.empty());
  }
}

TEST(Automorphisms, OrderMatchesNaiveEnumeration) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 25; ++trial) {
      Graph g = random_graph(n, trial % 3 == 0 ? 0.2 : 0.5, rng);
      auto group = automorphisms(g);
      EXPECT_EQ(group.order, count_automorphisms_naive(g)) << "n=" << n;
      for (const auto& gen : group.generators) EXPECT_TRUE(is_embedding(g, g, VertexMap{gen}));
      std::uint64_t fact = 1;
      for (int k = 2; k <= n; ++k) fact *= static_cast<std::uint64_t>(k);
      EXPECT_EQ(fact % group.order, 0u);
    }
}

TEST(Automorphisms, LargeSymmetricGraphs) {
  EXPECT_EQ(automorphisms(complete_graph(8)).order, 40320u);
  EXPECT_EQ(automorphisms(cycle_graph(10)).order, 20u);
  EXPECT_EQ(automorphisms(star_graph(6)).order, 720u);
}

TEST(FindIsomorphism, AgreesWithCanonicalMask) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 6);
    Graph g = random_graph(n, 0.5, rng), h = random_graph(n, 0.5, rng);
    auto iso = find_isomorphism(g, h);
    EXPECT_EQ(iso.has_value(), canonical_mask(g) == canonical_mask(h));
    if (iso) {
      EXPECT_TRUE(is_isomorphism(g, h, *iso));
    }
  }
  // Same degree sequence, not isomorphic.
  EXPECT_FALSE(find_isomorphism(cycle_graph(6), disjoint_union(cycle_graph(3), cycle_graph(3))).has_value());
}

TEST(FindEpimorphism, Examples) {
  EXPECT_TRUE(find_epimorphism(cycle_graph(5), cycle_graph(5)).has_value());
  auto m = find_epimorphism(path_graph(2), complete_graph(3));
  EXPECT_FALSE(m.has_value());  // a triangle has no proper 2-coloring
  EXPECT_TRUE(find_epimorphism(path_graph(2), path_graph(3)).has_value());
  EXPECT_FALSE(find_epimorphism(complete_graph(3), path_graph(2)).has_value());
}

TEST(FindEpimorphism, AgreesWithNaive) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    Graph h = random_graph(1 + static_cast<int>(rng() % 3), 0.6, rng);
    Graph hp = random_graph(1 + static_cast<int>(rng() % 5), 0.5, rng);
    auto fast = find_epimorphism(h, hp);
    EXPECT_EQ(fast.has_value(), has_epimorphism_naive(h, hp));
    if (fast) {
      EXPECT_TRUE(is_epimorphism(h, hp, *fast));
    }
  }
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(labeled_graphs(3).size(), 8u);
  EXPECT_EQ(graphs_up_to_iso(3).size(), 4u);
  EXPECT_EQ(graphs_up_to_iso(4).size(), 11u);
  EXPECT_EQ(graphs_up_to_iso(5).size(), 34u);
  int rigid6 = 0;
  for (const auto& g : graphs_up_to_iso(6)) rigid6 += is_rigid_small(g);
  EXPECT_EQ(rigid6, 8);
}

TEST(Json, RoundTripAndErrors) {
  Graph g = cycle_graph(4);
  EXPECT_EQ(graph_from_json(to_json(g)), g);
  EXPECT_EQ(to_json(g).dump(), R"({"edges":[[0,1],[0,3],[1,2],[2,3]],"n":4})");
  try {
    graph_from_json(Json::parse(R"({"n":2,"edges":[[0,2]]})"));
    FAIL();
  } catch (const MalformedInput& e) {
    EXPECT_EQ(e.field(), "/edges/0");
  }
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges":[]})")), MalformedInput);
}

TEST(Budget, RefusesOversizedGraphs) {
  Budget tight;
  tight.max_vertices = 4;
  EXPECT_THROW(find_embedding(path_graph(2), path_graph(5), tight), BudgetExceeded);
  Budget few_nodes;
  few_nodes.max_nodes = 3;
  EXPECT_THROW(find_embedding(Graph(6), Graph(7), few_nodes), BudgetExceeded);
}
