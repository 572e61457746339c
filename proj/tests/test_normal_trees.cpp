#include <gtest/gtest.h>

#include <random>
#include <set>

#include "forge/trees/json.hpp"
#include "forge/trees/le_max.hpp"
#include "forge/trees/normal_form.hpp"
#include "forge/trees/normal_tree.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

FiniteNormalTree tree_of(int d, int b, const std::vector<std::pair<std::string, Seq>>& nodes) {
  FiniteNormalTree t(d, b);
  for (const auto& [u, s] : nodes) t.insert(bits_from_string(u), s);
  return t;
}

// Full reflexive-diagonal triple tree: (u, u, s) for all u, s.
FiniteNormalTree3 diagonal_tree(int d, int b) {
  FiniteNormalTree3 t(d, b);
  for (int k = 0; k <= d; ++k)
    for (const auto& u : sequences_of_length(static_cast<std::size_t>(k), 2))
      for (const auto& s : sequences_of_length(static_cast<std::size_t>(k), b)) t.insert(u, u, s);
  return t;
}

// The documented negative pair.
FiniteNormalTree negative_s() { return tree_of(1, 2, {{"", {}}, {"1", {0}}, {"1", {1}}}); }
FiniteNormalTree negative_t() { return tree_of(1, 2, {{"", {}}, {"0", {0}}, {"0", {1}}}); }

}  // namespace

TEST(Enumerate, SmallCounts) {
  auto one = enumerate_trees(0, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], FiniteNormalTree::root_only(0, 1));
  EXPECT_EQ(enumerate_trees(1, 1).size(), 4u);
  EXPECT_EQ(enumerate_trees(1, 2).size(), 9u);
  EXPECT_EQ(count_trees(2, 2), 2116u);
}

TEST(Enumerate, ValidDuplicateFreeAndCounted) {
  for (auto [d, b] : std::vector<std::pair<int, int>>{{1, 3}, {2, 1}, {2, 2}, {3, 1}}) {
    auto corpus = enumerate_trees(d, b);
    EXPECT_EQ(corpus.size(), count_trees(d, b));
    std::set<std::string> seen;
    for (const auto& t : corpus) {
      EXPECT_TRUE(t.is_valid()) << *t.validate();
      seen.insert(to_json(t).dump());
    }
    EXPECT_EQ(seen.size(), corpus.size());
  }
}

TEST(Enumerate, MatchesFilteredPowerSetOnTinyFrames) {
  // Independent count: every subset of the (d=2, b=1) and (d=1, b=3) frames
  // that passes validate().
  for (auto [d, b] : std::vector<std::pair<int, int>>{{2, 1}, {1, 3}}) {
    auto frame = FiniteNormalTree(d, b).frame();
    ASSERT_LE(frame.size(), 20u);
    std::uint64_t valid = 0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << frame.size()); ++m) {
      FiniteNormalTree t(d, b);
      for (std::size_t i = 0; i < frame.size(); ++i)
        if (m >> i & 1) t.insert(frame[i].u, frame[i].s);
      valid += t.is_valid();
    }
    EXPECT_EQ(valid, count_trees(d, b));
  }
}

TEST(Enumerate, RefusesOverBudgetWithEstimate) {
  Budget tight;
  tight.max_instances = 100;
  try {
    enumerate_trees(2, 2, tight);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.estimate(), 2116u);
  }
}

TEST(NormalForm, Examples) {
  EXPECT_TRUE(check_normal_form(diagonal_tree(2, 2)).all());
  auto t = diagonal_tree(1, 2);
  t.insert(Seq{0}, Seq{1}, Seq{0});
  t.insert(Seq{0}, Seq{1}, Seq{1});
  auto rep = check_normal_form(t);
  EXPECT_FALSE(rep.antisymmetric);
  EXPECT_TRUE(rep.reflexive);
  EXPECT_EQ(rep, oracle::naive_normal_form(t));
  FiniteNormalTree3 bare = FiniteNormalTree3::root_only(1, 2);
  EXPECT_FALSE(check_normal_form(bare).reflexive);
}

TEST(NormalForm, AgreesWithNaiveOnRandomTrees) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    int d = 1 + trial % 3, b = 1 + (trial / 3) % 3;
    auto t = oracle::random_tree<2>(d, b, trial % 2 ? 0.1 : 0.4, rng);
    // Bias half the samples towards reflexive trees so transitivity is exercised.
    if (trial % 2) {
      for (const auto& n : diagonal_tree(d, b).nodes()) t.insert(n.u, n.s);
    }
    ASSERT_TRUE(t.is_valid());
    EXPECT_EQ(check_normal_form(t), oracle::naive_normal_form(t)) << to_json(t).dump();
  }
}

TEST(Slice, Examples) {
  FiniteNormalTree3 full(2, 2);
  for (const auto& n : full.frame()) full.insert(n.u, n.s);
  FiniteNormalTree all(2, 2);
  for (const auto& n : all.frame()) all.insert(n.u, n.s);
  EXPECT_EQ(slice(full, Seq{1, 0}), all);

  // Diagonal at x = 00: only u = 0^k survive, with every s.
  auto sl = slice(diagonal_tree(2, 2), Seq{0, 0, 1});
  FiniteNormalTree expect(2, 2);
  for (const auto& n : expect.frame())
    if (n.u[0] == Seq(n.s.size(), 0)) expect.insert(n.u, n.s);
  EXPECT_EQ(sl, expect);
  EXPECT_TRUE(sl.is_valid());

  // Slices at points differing at level 0 differ on the diagonal.
  EXPECT_NE(slice(diagonal_tree(2, 2), Seq{0, 0}), slice(diagonal_tree(2, 2), Seq{1, 0}));
  EXPECT_THROW(slice(diagonal_tree(2, 2), Seq{0}), PreconditionError);
}

TEST(Slice, PreservesValidity) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = oracle::random_tree<2>(2, 2, 0.3, rng);
    for (const auto& x : sequences_of_length(3, 2)) EXPECT_TRUE(slice(t, x).is_valid());
  }
}

TEST(LeMax, Examples) {
  auto corpus = enumerate_trees(1, 2);
  for (const auto& t : corpus) {
    EXPECT_TRUE(le_max(t, t).has_value());
    LipschitzMap id;
    for (const auto& s : t.s_projection()) id[s] = s;
    EXPECT_TRUE(is_valid_witness(t, t, id));
  }
  EXPECT_FALSE(le_max(negative_s(), negative_t()).has_value());
  EXPECT_TRUE(le_max(negative_t(), negative_t()).has_value());
  EXPECT_THROW(le_max(FiniteNormalTree::root_only(1, 2), FiniteNormalTree::root_only(2, 2)), PreconditionError);
}

TEST(LeMax, AgreesWithBruteForce) {
  auto corpus = enumerate_trees(1, 3);
  for (const auto& s : corpus)
    for (const auto& t : corpus) {
      auto fast = le_max(s, t);
      auto slow = oracle::le_max_brute(s, t);
      ASSERT_EQ(fast.has_value(), slow.has_value());
      if (fast) {
        EXPECT_EQ(*fast, *slow);
        EXPECT_TRUE(is_valid_witness(s, t, *fast));
      }
    }
  std::mt19937_64 rng(29);
  auto big = enumerate_trees(2, 2);
  for (int trial = 0; trial < 1500; ++trial) {
    const auto& s = big[rng() % big.size()];
    const auto& t = big[rng() % big.size()];
    auto fast = le_max(s, t);
    auto slow = oracle::le_max_brute(s, t);
    ASSERT_EQ(fast.has_value(), slow.has_value());
    if (fast) {
      EXPECT_EQ(*fast, *slow);
    }
  }
  // Mixed bounds.
  for (int trial = 0; trial < 300; ++trial) {
    auto s = oracle::random_tree<1>(2, 2, 0.3, rng);
    auto t = oracle::random_tree<1>(2, 3, 0.3, rng);
    EXPECT_EQ(le_max(s, t).has_value(), oracle::le_max_brute(s, t).has_value());
    EXPECT_EQ(le_max(t, s).has_value(), oracle::le_max_brute(t, s).has_value());
  }
}

TEST(LeMax, TransitiveByCompositionOnSmallCorpus) {
  auto corpus = enumerate_trees(1, 3);
  for (const auto& a : corpus)
    for (const auto& b : corpus) {
      auto f = le_max(a, b);
      if (!f) continue;
      for (const auto& c : corpus) {
        auto g = le_max(b, c);
        if (!g) continue;
        EXPECT_TRUE(is_valid_witness(a, c, compose(*f, *g)));
      }
    }
}

TEST(Clip, SoundnessAgainstUpwardClosure) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    int b = 1 + trial % 3;
    auto t = oracle::random_tree<1>(2, b, 0.3, rng);
    auto wide = rebound(t, 2 * b);
    std::uniform_int_distribution<int> entry(0, 2 * b - 1), bit(0, 1);
    for (int probe = 0; probe < 20; ++probe) {
      std::size_t k = rng() % 3;
      Seq u(k), s(k);
      for (std::size_t i = 0; i < k; ++i) {
        u[i] = bit(rng);
        s[i] = entry(rng);
      }
      EXPECT_EQ(oracle::in_upward_closure(t, u, s), t.contains(u, clip(s, b)));
      EXPECT_EQ(wide.contains(u, s), t.contains(u, clip(s, b)));
    }
  }
}

TEST(InjectiveWitness, PropertiesOnCorpus) {
  auto check = [](const FiniteNormalTree& s, const FiniteNormalTree& t) {
    auto f0 = le_max(s, t);
    if (!f0) return;
    auto w = canonical_injective_witness(s, t, *f0);
    EXPECT_EQ(w.bound, injective_bound(s.bound(), t.bound()));
    EXPECT_TRUE(is_valid_witness(s, w.target, w.f));
    EXPECT_TRUE(is_injective(w.f));
    EXPECT_TRUE(is_rank_monotone(w.f, s.bound(), w.bound));
    EXPECT_EQ(w.f.size(), sequences_up_to(static_cast<std::size_t>(s.depth()), s.bound()).size());
    for (const auto& [x, y] : *f0) EXPECT_TRUE(pointwise_leq(y, w.f.at(x)));
  };
  auto small = enumerate_trees(1, 2);
  for (const auto& s : small)
    for (const auto& t : small) check(s, t);
  std::mt19937_64 rng(37);
  auto big = enumerate_trees(2, 2);
  for (int trial = 0; trial < 500; ++trial) check(big[rng() % big.size()], big[rng() % big.size()]);
}

TEST(InjectiveWitness, SeparatesSiblingsWithEqualImages) {
  // Both children of the root map to <1> under f0.
  FiniteNormalTree s = tree_of(1, 2, {{"", {}}, {"0", {0}}, {"0", {1}}});
  FiniteNormalTree t = tree_of(1, 2, {{"", {}}, {"0", {1}}});
  auto f0 = le_max(s, t);
  ASSERT_TRUE(f0.has_value());
  EXPECT_EQ(f0->at(Seq{0}), f0->at(Seq{1}));
  auto w = canonical_injective_witness(s, t, *f0);
  EXPECT_EQ(w.bound, 6);
  EXPECT_EQ(w.f.at(Seq{0}), Seq{1});
  EXPECT_EQ(w.f.at(Seq{1}), Seq{2});
  EXPECT_TRUE(w.target.contains(Seq{0}, Seq{2}));
}

TEST(InjectiveWitness, DeterministicAndRejectsInvalid) {
  auto corpus = enumerate_trees(1, 2);
  const auto& t = corpus.back();
  auto f0 = le_max(t, t);
  ASSERT_TRUE(f0.has_value());
  auto w1 = canonical_injective_witness(t, t, *f0);
  auto w2 = canonical_injective_witness(t, t, *f0);
  EXPECT_EQ(w1.f, w2.f);
  // The identity is injective and rank-monotone, and it is the lex-least such map.
  for (const auto& [x, y] : w1.f) EXPECT_EQ(x, y);
  LipschitzMap bogus{{Seq{}, Seq{}}};
  EXPECT_THROW(canonical_injective_witness(negative_s(), negative_t(), bogus), PreconditionError);
}

TEST(Json, TreeRoundTripAndErrors) {
  auto t = negative_s();
  EXPECT_EQ(to_json(t).dump(), R"({"b":2,"d":1,"nodes":[["",[]],["1",[0]],["1",[1]]]})");
  EXPECT_EQ(tree_from_json(to_json(t)), t);
  auto d3 = diagonal_tree(1, 2);
  EXPECT_EQ(tree3_from_json(to_json(d3)), d3);
  // Not normal: (1, <0>) without (1, <1>).
  try {
    tree_from_json(Json::parse(R"({"d":1,"b":2,"nodes":[["",[]],["1",[0]]]})"));
    FAIL();
  } catch (const MalformedInput& e) {
    EXPECT_EQ(e.field(), "/nodes");
  }
  try {
    tree_from_json(Json::parse(R"({"d":1,"b":2,"nodes":[["",[]],["2",[0]]]})"));
    FAIL();
  } catch (const MalformedInput& e) {
    EXPECT_EQ(e.field(), "/nodes/1/0");
  }
  auto f = le_max(t, t);
  EXPECT_EQ(lipschitz_from_json(lipschitz_to_json(*f)), *f);
}
