#include <gtest/gtest.h>

#include <random>

#include "forge/graph/enumerate.hpp"
#include "forge/orders/colored_orders.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

ColoredOrdinalSum sum(std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks) {
  ColoredOrdinalSum s;
  for (auto [a, c] : blocks) s.blocks.push_back({a, c});
  return s;
}

ColoredOrdinalSum random_sum(std::mt19937_64& rng, std::size_t max_blocks = 6, std::uint64_t max_exp = 4, std::uint64_t colors = 3) {
  std::uniform_int_distribution<std::size_t> len(0, max_blocks);
  std::uniform_int_distribution<std::uint64_t> ex(0, max_exp), col(0, colors - 1);
  ColoredOrdinalSum s;
  for (std::size_t k = len(rng); k > 0; --k) s.blocks.push_back({ex(rng), col(rng)});
  return s;
}

ColorRelation random_table(std::mt19937_64& rng, std::size_t m) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<bool>> rows(m, std::vector<bool>(m));
  for (auto& r : rows)
    for (std::size_t y = 0; y < m; ++y) r[y] = coin(rng);
  return ColorRelation::table(rows);
}

}  // namespace

TEST(Embeds, Examples) {
  auto w = sum({{1, 0}, {0, 0}});
  auto omega = sum({{1, 0}});
  auto eq = ColorRelation::equality();
  EXPECT_EQ(embeds(w, w, eq), (BlockAssignment{0, 1}));
  EXPECT_FALSE(embeds(w, omega, eq).has_value());
  EXPECT_FALSE(oracle::colored_embeds_naive(w, omega, eq).has_value());
  EXPECT_TRUE(embeds(omega, w, eq).has_value());
  EXPECT_EQ(embeds(sum({{2, 0}, {1, 0}}), sum({{3, 0}}), eq), (BlockAssignment{0, 0}));
  EXPECT_TRUE(embeds({}, {}, eq).has_value());
  EXPECT_FALSE(embeds(sum({{0, 1}}), {}, eq).has_value());
  // Colors: geq lets a larger source color land on a smaller one.
  EXPECT_FALSE(embeds(sum({{0, 2}}), sum({{0, 1}}), eq).has_value());
  EXPECT_TRUE(embeds(sum({{0, 2}}), sum({{0, 1}}), ColorRelation::geq()).has_value());
  EXPECT_FALSE(embeds(sum({{0, 1}}), sum({{0, 2}}), ColorRelation::geq()).has_value());
}

TEST(Embeds, PowersOfOmega) {
  auto eq = ColorRelation::equality();
  for (std::uint64_t a = 0; a <= 5; ++a)
    for (std::uint64_t b = 0; b <= 5; ++b) EXPECT_EQ(embeds(sum({{a, 0}}), sum({{b, 0}}), eq).has_value(), a <= b);
}

TEST(Embeds, AgreesWithNaiveEnumeration) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    auto a = random_sum(rng), b = random_sum(rng);
    ColorRelation r = trial % 3 == 0 ? ColorRelation::equality() : trial % 3 == 1 ? ColorRelation::geq() : random_table(rng, 3);
    auto fast = embeds(a, b, r);
    auto slow = oracle::colored_embeds_naive(a, b, r);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << trial;
    if (fast) {
      EXPECT_TRUE(is_valid_assignment(a, b, r, *fast));
      // Leftmost placement returns the lexicographically least assignment.
      EXPECT_EQ(*fast, *slow);
    }
  }
}

TEST(Embeds, ReflexiveAndTransitive) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3000; ++trial) {
    auto a = random_sum(rng), b = random_sum(rng, 6, 4, 2), c = random_sum(rng, 6, 4, 2);
    for (auto r : {ColorRelation::equality(), ColorRelation::geq()}) {
      EXPECT_TRUE(embeds(a, a, r).has_value());
      auto f = embeds(a, b, r), g = embeds(b, c, r);
      if (f && g) {
        auto h = compose(*f, *g);
        EXPECT_TRUE(is_valid_assignment(a, c, r, h));
      }
    }
  }
}

TEST(Embeds, MonotoneInTheRelation) {
  // R subset R' gives embeds under R implies embeds under R'.
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 3000; ++trial) {
    auto small = random_table(rng, 3);
    auto rows = small.rows();
    for (auto& r : rows)
      for (std::size_t y = 0; y < r.size(); ++y)
        if (coin(rng)) r[y] = true;
    auto large = ColorRelation::table(rows);
    auto a = random_sum(rng), b = random_sum(rng);
    if (embeds(a, b, small)) {
      EXPECT_TRUE(embeds(a, b, large).has_value());
    }
  }
  // Equality sits inside geq.
  for (int trial = 0; trial < 3000; ++trial) {
    auto a = random_sum(rng), b = random_sum(rng);
    if (embeds(a, b, ColorRelation::equality())) {
      EXPECT_TRUE(embeds(a, b, ColorRelation::geq()).has_value());
    }
  }
}

TEST(IsoColored, Examples) {
  EXPECT_TRUE(iso_colored(sum({{1, 0}, {2, 0}}), sum({{2, 0}})));
  EXPECT_FALSE(iso_colored(sum({{2, 0}, {1, 0}}), sum({{2, 0}})));
  EXPECT_FALSE(iso_colored(sum({{1, 0}, {2, 1}}), sum({{2, 1}})));
  EXPECT_EQ(normal_form(sum({{0, 0}, {1, 0}, {0, 0}, {3, 0}, {3, 0}})), sum({{3, 0}, {3, 0}}));
  EXPECT_EQ(normal_form(sum({{1, 0}, {0, 1}, {2, 0}})), sum({{1, 0}, {0, 1}, {2, 0}}));
}

TEST(IsoColored, MatchesMutualEmbeddingUnderEquality) {
  // For finite colored sums of indecomposables, mutual embeddability under
  // equality and isomorphism coincide on this sample.
  std::mt19937_64 rng(13);
  auto eq = ColorRelation::equality();
  std::size_t isos = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    auto a = random_sum(rng, 4, 3, 2), b = random_sum(rng, 4, 3, 2);
    if (trial % 2 == 0) {
      // Insert absorbed blocks so that isomorphic pairs are frequent.
      b = a;
      std::uniform_int_distribution<std::size_t> at(0, b.size());
      std::size_t pos = at(rng);
      if (pos < b.size() && b.blocks[pos].exponent > 0) b.blocks.insert(b.blocks.begin() + static_cast<long>(pos), {b.blocks[pos].exponent - 1, b.blocks[pos].color});
    }
    bool iso = iso_colored(a, b);
    bool mutual = embeds(a, b, eq).has_value() && embeds(b, a, eq).has_value();
    EXPECT_EQ(iso, mutual) << trial;
    isos += iso;
  }
  EXPECT_GT(isos, 5000u);
}

TEST(BuildLG, Examples) {
  auto one = build_LG(complete_graph(1), 1, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.blocks[0].exponent, 2 * type_code(complete_graph(1), {0}));
  EXPECT_EQ(one.blocks[0].color, type_code(complete_graph(1), {0}));
  for (int d = 0; d <= 3; ++d)
    for (int b = 1; b <= 3; ++b) EXPECT_EQ(build_LG(path_graph(3), d, b).size(), count_shorter(static_cast<std::uint64_t>(b), static_cast<std::size_t>(d) + 1) - 1);
  EXPECT_EQ(build_LG(cycle_graph(4), 2, 3), build_LG(cycle_graph(4), 2, 3));
}

TEST(BuildLG, CantorEnumerationListsEveryNaturalInfinitelyOften) {
  EXPECT_EQ((std::vector<std::uint64_t>{cantor_k(0), cantor_k(1), cantor_k(2), cantor_k(3), cantor_k(4), cantor_k(5)}),
            (std::vector<std::uint64_t>{0, 1, 0, 2, 1, 0}));
  // Independent unpairing: n = (i+j)(i+j+1)/2 + j.
  for (std::uint64_t i = 0; i < 40; ++i)
    for (std::uint64_t j = 0; j < 40; ++j) EXPECT_EQ(cantor_k((i + j) * (i + j + 1) / 2 + j), i);
}

TEST(BuildLG, EdgeAndNonEdgeProfilesDiffer) {
  Graph edge = complete_graph(2), empty(2);
  // k = 0, 1 at positions 0, 1; <0,1> reads the pair (0, 1).
  EXPECT_NE(lg_profile(edge, 2, 2), lg_profile(empty, 2, 2));
  EXPECT_FALSE(iso_colored(build_LG(edge, 2, 2), build_LG(empty, 2, 2)));
}

TEST(IdentityLemma, Corpus) {
  auto corpus = graphs_up_to_iso_upto(4);
  for (auto [d, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 4}, {2, 7}}) {
    auto rep = verify_identity_lemma(corpus, d, b);
    EXPECT_EQ(rep.instances, corpus.size() * corpus.size());
    EXPECT_TRUE(rep.ok()) << d << " " << b;
  }
}

TEST(IdentityLemma, ProfileDeterminesLabeledGraphOnceEveryPairIsRead) {
  // With b = 7 the values k_0..k_6 cover 0..3, so every ordered pair of
  // vertices of a 4-vertex graph is some lambda_t: equal profiles force
  // literally equal graphs (the finite "G = G'").
  auto graphs = labeled_graphs(4);
  std::set<std::vector<std::uint64_t>> profiles;
  for (const auto& g : graphs) profiles.insert(lg_profile(g, 2, 7));
  EXPECT_EQ(profiles.size(), graphs.size());
  // Too shallow a truncation cannot see edges at all.
  std::set<std::vector<std::uint64_t>> shallow;
  for (const auto& g : graphs) shallow.insert(lg_profile(g, 1, 7));
  EXPECT_EQ(shallow.size(), 1u);
}
