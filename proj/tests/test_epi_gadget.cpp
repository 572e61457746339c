#include <gtest/gtest.h>

#include <random>

#include "forge/epi/epi_gadget.hpp"
#include "forge/graph/enumerate.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

// Same type iff the equality and adjacency patterns agree position by position.
bool same_type_naive(const Graph& g, const std::vector<int>& s, const Graph& h, const std::vector<int>& t) {
  if (s.size() != t.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if ((s[i] == s[j]) != (t[i] == t[j])) return false;
      if (s[i] != s[j] && g.has_edge(s[i], s[j]) != h.has_edge(t[i], t[j])) return false;
    }
  return true;
}

std::vector<std::vector<int>> all_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  for (const auto& s : sequences_of_length(static_cast<std::size_t>(k), n)) out.push_back(s);
  return out;
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

int clique_number(const Graph& g) {
  std::size_t best = 0;
  for (const auto& c : oracle::maximal_cliques(g)) best = std::max(best, c.size());
  return static_cast<int>(best);
}

}  // namespace

TEST(TypeCode, SmallArities) {
  Graph g = path_graph(3);
  EXPECT_EQ(type_code(g, {}), 0u);
  EXPECT_EQ(alpha(1), 1u);
  for (int v = 0; v < 3; ++v) EXPECT_EQ(type_code(g, {v}), alpha(1));
  EXPECT_EQ(type_code(complete_graph(1), {0}), alpha(1));
  // Equal, non-adjacent, adjacent.
  std::set<std::uint64_t> pairs{type_code(g, {1, 1}), type_code(g, {0, 2}), type_code(g, {0, 1})};
  EXPECT_EQ(pairs.size(), 3u);
  EXPECT_EQ(type_count(2), 3u);
  EXPECT_EQ(type_count(3), 15u);
  EXPECT_EQ(type_count(4), 127u);
  EXPECT_EQ(alpha(3), 5u);
}

TEST(TypeCode, AgreesWithNaiveTypeComparison) {
  // All graphs on 3 vertices, all tuples of arity <= 3.
  std::vector<std::pair<Graph, std::vector<int>>> items;
  for (const auto& g : labeled_graphs(3))
    for (int k = 0; k <= 3; ++k)
      for (auto& t : all_tuples(3, k)) items.emplace_back(g, t);
  std::set<std::uint64_t> seen;
  for (const auto& [g, t] : items) {
    auto c = type_code(g, t);
    const int k = static_cast<int>(t.size());
    EXPECT_GE(c, alpha(k));
    EXPECT_LT(c, alpha(k + 1));
    EXPECT_EQ(type_code(type_of_code(c)), c);
    seen.insert(c);
  }
  // Every code below alpha(4) is realized, so e restricted to TY_{<=3} is onto.
  EXPECT_EQ(seen.size(), alpha(4));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, items.size() - 1);
  for (int trial = 0; trial < 20000; ++trial) {
    const auto& [g, s] = items[pick(rng)];
    const auto& [h, t] = items[pick(rng)];
    EXPECT_EQ(type_code(g, s) == type_code(h, t), same_type_naive(g, s, h, t));
  }
}

TEST(BuildEpiGadget, SmallestInstanceHandCount) {
  auto e = build_epi_gadget(complete_graph(1), 1, 1);
  // Root block: a, b_1, b_2, c_0, d_0. Block <0>: a, b_1..b_3, c_0, d_0.
  EXPECT_EQ(e.blocks.size(), 2u);
  EXPECT_EQ(e.graph.n(), 11);
  EXPECT_EQ(e.graph.edge_count(), 16u);
  EXPECT_EQ(e.block_types, (std::vector<std::uint64_t>{0, 1}));
  EXPECT_TRUE(e.graph.has_edge(e.vertex({EpiKind::C, {}, 0}), e.a({0})));
  EXPECT_EQ(static_cast<std::uint64_t>(e.graph.n()), epi_gadget_vertex_count(complete_graph(1), 1, 1));
}

TEST(BuildEpiGadget, BlockStructure) {
  for (const auto& g : graphs_up_to_iso_upto(3))
    for (auto [d, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {2, 3}}) {
      auto e = build_epi_gadget(g, d, b);
      for (std::size_t k = 0; k < e.blocks.size(); ++k) {
        const Seq& t = e.blocks[k];
        const int n = static_cast<int>(e.block_types[k]);
        std::vector<int> t_mod;
        for (int x : t) t_mod.push_back(x % g.n());
        EXPECT_EQ(e.block_types[k], type_code(g, t_mod));
        std::vector<int> bs{e.a(t)}, cs;
        for (int j = 1; j <= n + 2; ++j) bs.push_back(e.vertex({EpiKind::B, t, j}));
        for (int i = 0; i < b; ++i) {
          cs.push_back(e.vertex({EpiKind::C, t, i}));
          cs.push_back(e.vertex({EpiKind::D, t, i}));
        }
        for (int x : bs)
          for (int y : bs) {
            if (x != y) {
              EXPECT_TRUE(e.graph.has_edge(x, y));
            }
          }
        for (int x : cs) {
          EXPECT_TRUE(e.graph.has_edge(bs.back(), x));
          for (int y : cs) {
            if (x != y) {
              EXPECT_TRUE(e.graph.has_edge(x, y));
            }
          }
          for (std::size_t j = 0; j + 1 < bs.size(); ++j) EXPECT_FALSE(e.graph.has_edge(bs[j], x));
        }
        // Cross edges: c_i^t to a^{t^i}, nothing else leaves the block.
        for (int i = 0; i < b; ++i) {
          int c = e.vertex({EpiKind::C, t, i});
          Seq child = t;
          child.push_back(i);
          int outside = e.graph.degree(c) - static_cast<int>(cs.size());
          if (static_cast<int>(t.size()) < d) {
            EXPECT_EQ(outside, 1);
            EXPECT_TRUE(e.graph.has_edge(c, e.a(child)));
          } else {
            EXPECT_EQ(outside, 0);
          }
        }
      }
      EXPECT_EQ(static_cast<std::uint64_t>(e.graph.n()), epi_gadget_vertex_count(g, d, b));
    }
}

TEST(BuildEpiGadget, RefusesOverBudgetAndEmptyGraph) {
  Budget tight;
  tight.max_vertices = 20;
  try {
    build_epi_gadget(complete_graph(2), 2, 2, tight);
    FAIL();
  } catch (const BudgetExceeded& err) {
    EXPECT_EQ(err.estimate(), epi_gadget_vertex_count(complete_graph(2), 2, 2));
  }
  EXPECT_THROW(build_epi_gadget(Graph(0), 1, 1), PreconditionError);
}

TEST(SimpleAutomorphisms, GroupMatchesDefinitionByBruteForce) {
  // The library's twin-class description against filtering the full group.
  std::mt19937_64 rng(3);
  for (const auto& g : graphs_up_to_iso_upto(3))
    for (auto [d, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}}) {
      auto e = build_epi_gadget(g, d, b);
      Graph h = oracle::relabel(e.graph, random_permutation(e.graph.n(), rng));
      auto cliques = oracle::maximal_cliques(h);
      std::size_t simple = 0;
      for (const auto& p : oracle::group_elements(automorphisms(h).generators, h.n())) simple += oracle::is_simple_permutation(cliques, p);
      auto group = simple_automorphism_group(h);
      EXPECT_EQ(group.order, simple);
      for (const auto& gen : group.generators) {
        EXPECT_TRUE(is_isomorphism(h, h, VertexMap{gen}));
        EXPECT_TRUE(oracle::is_simple_permutation(cliques, gen));
      }
    }
}

TEST(SimpleAutomorphisms, MovedPointsOnlyAtTruncationBoundary) {
  // Inside the truncation every a^t (t nonempty), b_{n+2} and c_i is fixed.
  // At the boundary the root a^∅ has no parent edge and leaf c_i have no
  // child edge, so they become twins of b_j and d_j respectively.
  for (const auto& g : graphs_up_to_iso_upto(3)) {
    auto e = build_epi_gadget(g, 2, 2);
    std::set<int> moved;
    for (const auto& gen : simple_automorphism_group(e).generators)
      for (int v = 0; v < e.graph.n(); ++v)
        if (gen[static_cast<std::size_t>(v)] != v) moved.insert(v);
    for (int v = 0; v < e.graph.n(); ++v) {
      const EpiTag& tag = e.tags[static_cast<std::size_t>(v)];
      const auto n = e.block_types[static_cast<std::size_t>(std::find(e.blocks.begin(), e.blocks.end(), tag.t) - e.blocks.begin())];
      bool expected = false;
      switch (tag.kind) {
        case EpiKind::A: expected = tag.t.empty(); break;
        case EpiKind::B: expected = tag.i <= static_cast<int>(n) + 1; break;
        case EpiKind::C: expected = static_cast<int>(tag.t.size()) == e.d; break;
        case EpiKind::D: expected = true; break;
      }
      EXPECT_EQ(moved.count(v) == 1, expected) << epi_kind_name(tag.kind) << " block of length " << tag.t.size();
    }
  }
}

TEST(SimpleAutomorphisms, OrderAgainstProductFormula) {
  // K1 is the only rigid graph on <= 4 vertices. Its truncated G* has more
  // symmetry than the formula counts, both simple (boundary twins) and
  // non-simple (sibling subtrees with equal types).
  auto e = build_epi_gadget(complete_graph(1), 1, 2);
  EXPECT_EQ(aut_product_formula(e), 32u);
  EXPECT_EQ(simple_automorphism_group(e).order, 9216u);
  EXPECT_EQ(automorphisms(e.graph).order, 18432u);
  // Formula restricted to interior blocks: the root contributes (n+2)! b!
  // and every leaf (n+1)! (2b)!.
  for (const auto& g : graphs_up_to_iso_upto(3)) {
    auto ge = build_epi_gadget(g, 2, 2);
    std::uint64_t predicted = 1;
    for (std::size_t k = 0; k < ge.blocks.size(); ++k) {
      auto n = ge.block_types[k];
      if (ge.blocks[k].empty())
        predicted *= saturating_factorial(n + 2) * saturating_factorial(2);
      else if (static_cast<int>(ge.blocks[k].size()) == ge.d)
        predicted *= saturating_factorial(n + 1) * saturating_factorial(4);
      else
        predicted *= saturating_factorial(n + 1) * saturating_factorial(2);
    }
    EXPECT_EQ(simple_automorphism_group(ge).order, predicted);
  }
}

TEST(CanExtendSimple, Examples) {
  auto e = build_epi_gadget(complete_graph(2), 2, 2);
  const int n = e.graph.n();
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
  EXPECT_TRUE(can_extend_simple(e, {}));
  EXPECT_TRUE(can_extend_simple(e, id));
  // Swapping b_1, b_2 of block <0>: a prefix covering both.
  int b1 = e.vertex({EpiKind::B, {0}, 1}), b2 = e.vertex({EpiKind::B, {0}, 2});
  auto swap = id;
  std::swap(swap[static_cast<std::size_t>(b1)], swap[static_cast<std::size_t>(b2)]);
  EXPECT_TRUE(can_extend_simple(e, std::vector<int>(swap.begin(), swap.begin() + b2 + 1)));
  // Moving a^<0> anywhere fails.
  int a0 = e.a({0});
  auto moved = std::vector<int>(id.begin(), id.begin() + a0 + 1);
  moved[static_cast<std::size_t>(a0)] = b2;
  EXPECT_FALSE(can_extend_simple(e, moved));
  EXPECT_THROW(can_extend_simple(e, {0, 0}), PreconditionError);
}

TEST(CanExtendSimple, AgreesWithBruteForceOnAllShortSequences) {
  std::mt19937_64 rng(11);
  for (const auto& g : graphs_up_to_iso_upto(3))
    for (auto [d, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}}) {
      auto e = build_epi_gadget(g, d, b);
      for (int copy = 0; copy < 2; ++copy) {
        Graph h = copy == 0 ? e.graph : oracle::relabel(e.graph, random_permutation(e.graph.n(), rng));
        auto truth = oracle::simple_extension_prefixes(h, 3);
        for (const auto& a : oracle::injective_sequences(h.n(), 3)) ASSERT_EQ(can_extend_simple(h, a), truth.count(a) == 1);
      }
    }
}

TEST(IsoBridge, TruncationDepthMatters) {
  auto corpus = graphs_up_to_iso_upto(4);
  ASSERT_EQ(corpus.size(), 18u);
  // Tuples of length <= 1 carry a single type, so at depth 1 every G* is
  // the same graph and every pair of distinct graphs collides.
  auto shallow = verify_iso_bridge(corpus, 1, 2);
  EXPECT_EQ(shallow.instances, 324u);
  EXPECT_EQ(shallow.violations.size(), 324u - 18u);
  // Pairs over 4 vertices: depth 2 with b = 4 reads every ordered pair.
  auto deep = verify_iso_bridge(corpus, 2, 4);
  EXPECT_TRUE(deep.ok()) << deep.violations.size();
}

TEST(IsoBridge, Examples) {
  Graph c6 = cycle_graph(6);
  Graph two_c3 = disjoint_union(cycle_graph(3), cycle_graph(3));
  // Depth 2 sees pair types only, and below each <i> just the degree of i:
  // both graphs are 2-regular, so the gadgets collide. Depth 3 sees the
  // triangles through the types of triples.
  auto rep = verify_iso_bridge({c6, two_c3}, 2, 6);
  EXPECT_EQ(rep.instances, 4u);
  EXPECT_EQ(rep.violations.size(), 2u);
  Budget wide;
  wide.max_vertices = 20000;
  EXPECT_TRUE(verify_iso_bridge({c6, two_c3}, 3, 6, wide).ok());
  EXPECT_TRUE(verify_iso_bridge({path_graph(3)}, 1, 2).ok());
}

TEST(EpiBridge, ForwardWitnessIsEpimorphism) {
  auto corpus = graphs_up_to_iso_upto(3);
  std::size_t built = 0, refused = 0;
  for (auto [d, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {2, 3}}) {
    std::vector<EpiGadget> gadgets;
    for (const auto& g : corpus) gadgets.push_back(build_epi_gadget(g, d, b));
    for (std::size_t i = 0; i < corpus.size(); ++i)
      for (std::size_t j = 0; j < corpus.size(); ++j) {
        auto f = find_embedding(corpus[i], corpus[j]);
        if (!f) continue;
        auto gamma = forward_epi_witness(gadgets[i], gadgets[j], *f);
        if (!gamma) {
          ++refused;
          continue;
        }
        ++built;
        EXPECT_TRUE(is_epimorphism(gadgets[i].graph, gadgets[j].graph, *gamma));
      }
  }
  EXPECT_GT(built, 0u);
  EXPECT_GT(refused, 0u);
}

TEST(EpiBridge, TruncationCanRuleOutAnyEpimorphism) {
  // K1 embeds in K2, but at (2,2) the block of <0,1> in K2* carries a clique
  // larger than any clique of K1*, and edge-preserving maps are injective on
  // cliques.
  auto g = build_epi_gadget(complete_graph(1), 2, 2);
  auto h = build_epi_gadget(complete_graph(2), 2, 2);
  EXPECT_GT(clique_number(h.graph), clique_number(g.graph));
  EXPECT_FALSE(forward_epi_witness(g, h, VertexMap{{0}}).has_value());
}
