#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "forge/graph/enumerate.hpp"
#include "forge/graph/search.hpp"
#include "forge/metric/metric_gadget.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

Rational q(long num, long den = 1) { return make_rational(num, den); }

FiniteMetric relabel_metric(const FiniteMetric& m, const std::vector<int>& p) {
  FiniteMetric out(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j) out.set(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)], m.at(i, j));
  return out;
}

// Distances from {5/4, 6/4, 7/4, 2}: any such matrix is a metric.
FiniteMetric random_metric(int n, std::mt19937& rng) {
  FiniteMetric m(n);
  std::uniform_int_distribution<int> w(1, 4);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set(i, j, q(w(rng) + 4, 4));
  return m;
}

// Shared vertices of the root paths to x and y, straight from graph distances.
int shared_vertices(const std::vector<std::vector<int>>& dist, int root, int x, int y) {
  auto at = [&](int a, int b) { return dist[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };
  return (at(root, x) + at(root, y) - at(x, y)) / 2 + 1;
}

}  // namespace

TEST(FiniteMetric, ValidateAndUltrametric) {
  FiniteMetric m(3);
  m.set(0, 1, q(1));
  m.set(1, 2, q(1));
  m.set(0, 2, q(3));
  EXPECT_TRUE(m.validate().has_value());
  m.set(0, 2, q(2));
  EXPECT_FALSE(m.validate().has_value());
  EXPECT_FALSE(m.is_ultrametric());
  m.set(0, 2, q(1));
  EXPECT_TRUE(m.is_ultrametric());
  m.set(0, 2, q(0));
  EXPECT_TRUE(m.validate().has_value());
}

TEST(BuildDiscrete, PathAndErrors) {
  auto m = build_discrete(path_graph(3));
  EXPECT_EQ(m.at(0, 2), q(2));
  EXPECT_EQ(m.at(0, 1), q(1));
  EXPECT_FALSE(m.validate().has_value());
  EXPECT_THROW(build_discrete(cycle_graph(4)), PreconditionError);
  EXPECT_THROW(build_discrete(disjoint_union(path_graph(2), path_graph(2))), PreconditionError);
}

TEST(BuildDiscrete, RecoveryRoundTripOnGadgets) {
  for (const auto& t : enumerate_trees(1, 2)) {
    auto g = build_gadget(t);
    EXPECT_EQ(recover_graph(build_discrete(g.graph)), g.graph);
  }
}

TEST(BuildDiscrete, IsometricEmbeddingMatchesInducedEmbeddingOnSmallTrees) {
  auto trees = trees_up_to_iso_upto(8);
  ASSERT_EQ(trees.size(), 48u);
  std::vector<FiniteMetric> ms;
  for (const auto& t : trees) ms.push_back(build_discrete(t));
  int yes = 0;
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = 0; j < trees.size(); ++j) {
      auto f = iso_embed_metric(ms[i], ms[j]);
      bool sub = find_embedding(trees[i], trees[j]).has_value();
      ASSERT_EQ(f.has_value(), sub) << i << " " << j;
      if (f) {
        EXPECT_TRUE(is_isometric_embedding(ms[i], ms[j], *f));
        ++yes;
      }
    }
  EXPECT_GT(yes, 48);
}

TEST(IsoEmbedMetric, TrivialCases) {
  FiniteMetric a(2), b(2);
  a.set(0, 1, q(1));
  b.set(0, 1, q(1, 2));
  EXPECT_FALSE(iso_embed_metric(a, b).has_value());
  EXPECT_FALSE(iso_metric(a, b).has_value());
  EXPECT_EQ(iso_embed_metric(a, a)->image, (std::vector<int>{0, 1}));
  std::mt19937 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    auto m = random_metric(5, rng);
    std::vector<int> p{0, 1, 2, 3, 4};
    std::shuffle(p.begin(), p.end(), rng);
    auto r = relabel_metric(m, p);
    auto f = iso_metric(m, r);
    ASSERT_TRUE(f.has_value());
    EXPECT_TRUE(is_isometric_embedding(m, r, *f));
  }
}

TEST(BranchSpace, ForkDistancesFromTheConstruction) {
  auto t = FiniteNormalTree::root_only(1, 2);
  auto sp = build_branch_space(build_gadget(t));
  ASSERT_FALSE(sp.metric.validate().has_value());
  EXPECT_TRUE(sp.metric.is_ultrametric());
  const auto& root_fork = sp.forks[0];
  ASSERT_TRUE(root_fork.s.empty());
  ASSERT_EQ(root_fork.points.size(), 3u);
  EXPECT_EQ(sp.metric.at(root_fork.points[0], root_fork.points[2]), q(1, 4));
  const Fork* code = nullptr;
  for (const auto& f : sp.forks)
    if (f.kind == BranchKind::Code && f.s.empty() && f.u.empty()) code = &f;
  ASSERT_NE(code, nullptr);
  EXPECT_EQ(sp.metric.at(code->points[0], code->points[1]), q(1, 8));
  // b_{0,i} and the spine branch through the root meet only at the root.
  int rep = sp.spine_representative({});
  EXPECT_EQ(sp.points[static_cast<std::size_t>(rep)].s, (Seq{0}));
  EXPECT_EQ(sp.metric.at(root_fork.points[1], rep), q(1));
}

TEST(BranchSpace, MatchesGraphDistancesOnCorpus) {
  for (auto [d, b] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}}) {
    for (const auto& t : enumerate_trees(d, b)) {
      auto g = build_gadget(t);
      auto sp = build_branch_space(g);
      ASSERT_TRUE(sp.metric.is_ultrametric());
      auto dist = distance_matrix(g.graph);
      const int root = g.seq_vertex({});
      std::size_t leaves = 0;
      for (int v = 0; v < g.graph.n(); ++v) leaves += v != root && g.graph.degree(v) == 1;
      EXPECT_EQ(static_cast<std::size_t>(sp.metric.n()), leaves);
      for (int x = 0; x < sp.metric.n(); ++x)
        for (int y = x + 1; y < sp.metric.n(); ++y) {
          int shared = shared_vertices(dist, root, sp.points[static_cast<std::size_t>(x)].leaf, sp.points[static_cast<std::size_t>(y)].leaf);
          ASSERT_EQ(sp.metric.at(x, y), inverse_power_of_two(static_cast<unsigned>(shared - 1)));
        }
      for (const auto& f : sp.forks)
        for (std::size_t i = 0; i < f.points.size(); ++i)
          for (std::size_t j = i + 1; j < f.points.size(); ++j) {
            unsigned e = f.kind == BranchKind::Tine ? static_cast<unsigned>(2 * f.s.size() + 2)
                                                    : static_cast<unsigned>(2 * f.s.size() + 2 * theta(f.u) + 3);
            EXPECT_EQ(sp.metric.at(f.points[i], f.points[j]), inverse_power_of_two(e));
          }
    }
  }
}

TEST(BranchSpace, ForwardBridgeMapsForksToForks) {
  auto corpus = enumerate_trees(1, 2);
  int built = 0;
  for (const auto& s : corpus)
    for (const auto& t : corpus) {
      auto f0 = le_max(s, t);
      if (!f0) continue;
      auto src = build_branch_space(build_gadget(s));
      auto e = branch_embedding_from_witness(s, t, *f0);
      ASSERT_TRUE(is_isometric_embedding(src.metric, e.target.metric, e.map));
      for (const auto& fork : src.forks) {
        int image_fork = e.target.points[static_cast<std::size_t>(e.map.image[static_cast<std::size_t>(fork.points[0])])].fork;
        const auto& tf = e.target.forks[static_cast<std::size_t>(image_fork)];
        EXPECT_EQ(tf.kind, fork.kind);
        EXPECT_EQ(tf.s.size(), fork.s.size());
        EXPECT_EQ(theta(tf.u), theta(fork.u));
        for (int p : fork.points) EXPECT_EQ(e.target.points[static_cast<std::size_t>(e.map.image[static_cast<std::size_t>(p)])].fork, image_fork);
      }
      ++built;
    }
  EXPECT_GT(built, 9);
}

TEST(BranchSpace, IsometryBridgeOnCorpus) {
  auto corpus = enumerate_trees(1, 2);
  std::vector<BranchSpace> spaces;
  for (const auto& t : corpus) spaces.push_back(build_branch_space(build_gadget(t)));
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) EXPECT_EQ(iso_metric(spaces[i].metric, spaces[j].metric).has_value(), corpus[i] == corpus[j]) << i << " " << j;
}

TEST(BallStructure, SingletonAndTwoPoints) {
  auto one = build_ball_structure(FiniteMetric(1));
  ASSERT_EQ(one.size(), 1);
  EXPECT_TRUE(one.R(0, 0));

  FiniteMetric m(2);
  m.set(0, 1, q(1, 4));
  auto s = build_ball_structure(m);
  // Grid {1/4, 1/2}: B(x, 1/4) = {x}, B(x, 1/2) = both points.
  ASSERT_EQ(s.grid, (std::vector<Rational>{q(1, 4), q(1, 2)}));
  ASSERT_EQ(s.size(), 4);
  EXPECT_TRUE(s.isolating(0));
  EXPECT_FALSE(s.isolating(1));
  EXPECT_TRUE(s.R(0, 1));
  EXPECT_FALSE(s.R(1, 0));
  EXPECT_FALSE(s.R(0, 2));
  EXPECT_TRUE(s.R(0, 3));
  EXPECT_TRUE(s.R(1, 3) && s.R(3, 1));
  EXPECT_TRUE(s.Q(0, 0));   // diam 0 < 1/4
  EXPECT_FALSE(s.Q(0, 1));  // diam 1/4
  EXPECT_TRUE(s.Q(1, 1));
}

TEST(BallStructure, IsometricSpacesGiveIsomorphicStructures) {
  std::mt19937 rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    int n = 2 + rep % 5;
    auto m = random_metric(n, rng);
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    auto a = to_colored(build_ball_structure(m));
    auto b = to_colored(build_ball_structure(relabel_metric(m, p)));
    EXPECT_TRUE(find_structure_isomorphism(a, b).has_value());
  }
}

TEST(CanExtendBallAuto, Examples) {
  auto sp = build_branch_space(build_gadget(FiniteNormalTree::root_only(1, 1)));
  auto s = build_ball_structure(sp);
  EXPECT_TRUE(can_extend_ball_auto(s, {}));
  // Two names of the whole space.
  const int g = static_cast<int>(s.grid.size());
  EXPECT_TRUE(can_extend_ball_auto(s, {{g - 1, 2 * g - 1}}));
  // Isolated points of different forks.
  int b0 = -1, c0 = -1;
  for (int e = 0; e < s.size(); ++e)
    if (s.isolating(e)) {
      const auto& p = sp.points[static_cast<std::size_t>(s.point(e))];
      if (p.kind == BranchKind::Tine && b0 < 0) b0 = e;
      if (p.kind == BranchKind::Code && c0 < 0) c0 = e;
    }
  ASSERT_GE(b0, 0);
  ASSERT_GE(c0, 0);
  EXPECT_FALSE(can_extend_ball_auto(s, {{b0, c0}}));
  EXPECT_THROW(can_extend_ball_auto(s, {{b0, c0}, {b0, b0}}), PreconditionError);
  EXPECT_THROW(can_extend_ball_auto(build_ball_structure(sp.metric), {}), PreconditionError);
}

TEST(CanExtendBallAuto, AgreesWithBruteForce) {
  std::mt19937 rng(5);
  int positives = 0, negatives = 0;
  std::vector<FiniteNormalTree> trees = enumerate_trees(0, 1);
  for (const auto& t : enumerate_trees(1, 1)) trees.push_back(t);
  for (const auto& t : trees) {
    auto s = build_ball_structure(build_branch_space(build_gadget(t)));
    if (s.size() > 130) continue;  // keeps the pinned searches to a few seconds
    auto cs = to_colored(s);
    // Single pairs: extendable iff some automorphism sends x to y. Orbits come
    // from pinned searches, one per (element, orbit representative).
    std::vector<int> reps, orbit(static_cast<std::size_t>(s.size()));
    for (int x = 0; x < s.size(); ++x) {
      orbit[static_cast<std::size_t>(x)] = x;
      for (int r : reps)
        if (find_structure_isomorphism(cs, cs, {{x, r}})) {
          orbit[static_cast<std::size_t>(x)] = r;
          break;
        }
      if (orbit[static_cast<std::size_t>(x)] == x) reps.push_back(x);
    }
    for (int x = 0; x < s.size(); ++x)
      for (int y = 0; y < s.size(); ++y) {
        bool expect = orbit[static_cast<std::size_t>(x)] == orbit[static_cast<std::size_t>(y)];
        ASSERT_EQ(can_extend_ball_auto(s, {{x, y}}), expect) << x << " " << y;
      }
    // Maps of size 2 and 3; on odd rounds every image is drawn from the
    // orbit of its source, so both answers occur often.
    std::uniform_int_distribution<int> pick(0, s.size() - 1);
    auto in_orbit = [&](int x) {
      std::vector<int> pool;
      for (int z = 0; z < s.size(); ++z)
        if (orbit[static_cast<std::size_t>(z)] == orbit[static_cast<std::size_t>(x)]) pool.push_back(z);
      return pool[rng() % pool.size()];
    };
    for (int rep = 0; rep < 150; ++rep) {
      std::set<int> dom, img;
      std::vector<std::pair<int, int>> h;
      const int size = 2 + rep % 2;
      while (static_cast<int>(h.size()) < size) {
        int x = pick(rng);
        int y = rep % 2 ? in_orbit(x) : pick(rng);
        if (dom.count(x) || img.count(y)) continue;
        dom.insert(x);
        img.insert(y);
        h.emplace_back(x, y);
      }
      bool brute = find_structure_isomorphism(cs, cs, h).has_value();
      ASSERT_EQ(can_extend_ball_auto(s, h), brute);
      (brute ? positives : negatives) += 1;
    }
  }
  EXPECT_GT(positives, 50);
  EXPECT_GT(negatives, 50);
}
