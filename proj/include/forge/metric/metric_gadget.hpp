#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forge/core/budget.hpp"
#include "forge/core/error.hpp"
#include "forge/core/rational.hpp"
#include "forge/core/sequences.hpp"
#include "forge/gadget/tree_gadget.hpp"
#include "forge/graph/graph.hpp"
#include "forge/graph/refinement.hpp"
#include "forge/trees/le_max.hpp"

namespace forge {

// Points 0..n-1 with an exact rational distance matrix.
class FiniteMetric {
 public:
  explicit FiniteMetric(int n = 0) : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    if (n < 0) throw PreconditionError("negative point count");
  }

  int n() const noexcept { return n_; }
  const Rational& at(int i, int j) const { return d_[idx(i, j)]; }
  void set(int i, int j, const Rational& q) {
    d_[idx(i, j)] = q;
    d_[idx(j, i)] = q;
  }

  // Reason the matrix is not a metric, or none.
  std::optional<std::string> validate() const {
    for (int i = 0; i < n_; ++i) {
      if (at(i, i) != 0) return "nonzero diagonal at " + std::to_string(i);
      for (int j = 0; j < n_; ++j) {
        if (at(i, j) != at(j, i)) return "asymmetric at " + std::to_string(i) + "," + std::to_string(j);
        if (i != j && at(i, j) <= 0) return "non-positive distance at " + std::to_string(i) + "," + std::to_string(j);
        for (int k = 0; k < n_; ++k)
          if (at(i, k) > at(i, j) + at(j, k)) return "triangle inequality fails at " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k);
      }
    }
    return std::nullopt;
  }

  bool is_ultrametric() const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          if (at(i, k) > std::max(at(i, j), at(j, k))) return false;
    return true;
  }

  // Distinct positive distances, ascending.
  std::vector<Rational> distances() const {
    std::set<Rational> out;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) out.insert(at(i, j));
    return {out.begin(), out.end()};
  }

  friend bool operator==(const FiniteMetric& a, const FiniteMetric& b) { return a.n_ == b.n_ && a.d_ == b.d_; }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw PreconditionError("point out of range");
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<Rational> d_;
};

// Geodesic metric of a combinatorial tree.
inline FiniteMetric build_discrete(const Graph& g) {
  if (!is_combinatorial_tree(g)) throw PreconditionError("build_discrete needs a connected acyclic graph");
  auto dist = distance_matrix(g);
  FiniteMetric m(g.n());
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j) m.set(i, j, Rational(dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
  return m;
}

// Links points at distance 1.
inline Graph recover_graph(const FiniteMetric& m) {
  Graph g(m.n());
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j)
      if (m.at(i, j) == 1) g.add_edge(i, j);
  return g;
}

inline bool is_isometric_embedding(const FiniteMetric& a, const FiniteMetric& b, const VertexMap& f) {
  if (f.image.size() != static_cast<std::size_t>(a.n())) throw MalformedInput("map", "length differs from domain size");
  for (int v : f.image)
    if (v < 0 || v >= b.n()) throw MalformedInput("map", "image out of range");
  for (int i = 0; i < a.n(); ++i)
    for (int j = i + 1; j < a.n(); ++j) {
      int x = f.image[static_cast<std::size_t>(i)], y = f.image[static_cast<std::size_t>(j)];
      if (x == y || a.at(i, j) != b.at(x, y)) return false;
    }
  return true;
}

namespace detail {

class IsometrySearch {
 public:
  IsometrySearch(const FiniteMetric& a, const FiniteMetric& b, const Budget& budget) : a_(a), b_(b), counter_(budget) {
    // y can host x only if x's distance multiset fits inside y's.
    auto profile = [](const FiniteMetric& m, int x) {
      std::vector<Rational> out;
      for (int z = 0; z < m.n(); ++z)
        if (z != x) out.push_back(m.at(x, z));
      std::sort(out.begin(), out.end());
      return out;
    };
    fits_.assign(static_cast<std::size_t>(a.n()), std::vector<char>(static_cast<std::size_t>(b.n()), 0));
    for (int x = 0; x < a.n(); ++x) {
      auto px = profile(a, x);
      for (int y = 0; y < b.n(); ++y) {
        auto py = profile(b, y);
        fits_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = std::includes(py.begin(), py.end(), px.begin(), px.end());
      }
    }
  }

  std::optional<VertexMap> run() {
    map_.assign(static_cast<std::size_t>(a_.n()), -1);
    used_.assign(static_cast<std::size_t>(b_.n()), 0);
    if (!recurse(0)) return std::nullopt;
    return VertexMap{map_};
  }

 private:
  bool recurse(int x) {
    if (x == a_.n()) return true;
    counter_.tick("isometric embedding search");
    for (int y = 0; y < b_.n(); ++y) {
      if (used_[static_cast<std::size_t>(y)] || !fits_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]) continue;
      bool ok = true;
      for (int z = 0; z < x && ok; ++z) ok = a_.at(x, z) == b_.at(y, map_[static_cast<std::size_t>(z)]);
      if (!ok) continue;
      map_[static_cast<std::size_t>(x)] = y;
      used_[static_cast<std::size_t>(y)] = 1;
      if (recurse(x + 1)) return true;
      used_[static_cast<std::size_t>(y)] = 0;
    }
    map_[static_cast<std::size_t>(x)] = -1;
    return false;
  }

  const FiniteMetric& a_;
  const FiniteMetric& b_;
  NodeCounter counter_;
  std::vector<std::vector<char>> fits_;
  std::vector<int> map_;
  std::vector<char> used_;
};

}  // namespace detail

// Lexicographically least injective distance-preserving map, or none.
inline std::optional<VertexMap> iso_embed_metric(const FiniteMetric& a, const FiniteMetric& b, const Budget& budget = default_budget()) {
  if (a.n() > b.n()) return std::nullopt;
  return detail::IsometrySearch(a, b, budget).run();
}

// Bijective case through the refinement engine, distances as pair colors.
inline std::optional<VertexMap> iso_metric(const FiniteMetric& a, const FiniteMetric& b, const Budget& budget = default_budget()) {
  if (a.n() != b.n()) return std::nullopt;
  budget.check_vertices(static_cast<std::size_t>(a.n()), "isometry test");
  std::map<Rational, int> code;
  for (const auto* m : {&a, &b})
    for (const auto& q : m->distances()) code.emplace(q, 0);
  int next = 1;
  for (auto& [q, c] : code) c = next++;
  auto lift = [&](const FiniteMetric& m) {
    ColoredStructure s(m.n());
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j)
        if (i != j) s.set_pair(i, j, code.at(m.at(i, j)));
    s.finalize();
    return s;
  };
  auto f = find_structure_isomorphism(lift(a), lift(b), {}, budget);
  if (!f) return std::nullopt;
  return VertexMap{*f};
}

enum class BranchKind { Tine, Code };

// A maximal root path of a gadget: b_{s,i} ends at Tine(s,i,i); c_{s,u,0}
// runs to the end of the code path of (u,s) and c_{s,u,1} to its side leaf.
struct BranchPoint {
  BranchKind kind = BranchKind::Tine;
  Seq s;
  int i = 0;
  Seq u;
  int leaf = -1;  // gadget vertex
  int fork = -1;
};

// F_s = {b_{s,i} : i <= #s+2} or F_{s,u} = {c_{s,u,0}, c_{s,u,1}}.
struct Fork {
  BranchKind kind = BranchKind::Tine;
  Seq s;
  Seq u;
  std::vector<int> points;
};

struct BranchSpace {
  FiniteMetric metric;
  std::vector<BranchPoint> points;
  std::vector<Fork> forks;
  int d = 0;
  int b = 0;
  // slots[k] is the point named by psi'_k, or -1: slot 3 rank#(s) holds the
  // spine representative at s, slot 3n+1 the n-th b-branch, slot 3n+2 the
  // n-th c-branch.
  std::vector<int> slots;

  // Stand-in for the missing accumulation point a_{s^0...}: the least
  // maximal extension of s^0...0 in vertex order, which is b_{s^0...0, 0}.
  int spine_representative(const Seq& s) const {
    Seq x = s;
    x.resize(static_cast<std::size_t>(d), 0);
    for (std::size_t p = 0; p < points.size(); ++p)
      if (points[p].kind == BranchKind::Tine && points[p].s == x && points[p].i == 0) return static_cast<int>(p);
    throw PreconditionError("sequence outside the spine");
  }
};

// One point per maximal path from Seq(empty); d(x, y) = 2^{-n} when x and y
// share n + 1 vertices. Points are listed b-branches first, ordered by
// (rank#(s), i), then c-branches by (rank#(s), theta(u), i).
inline BranchSpace build_branch_space(const GadgetGraph& g) {
  const Graph& graph = g.graph;
  const int root = g.seq_vertex({});
  std::vector<int> parent(static_cast<std::size_t>(graph.n()), -1), depth(static_cast<std::size_t>(graph.n()), 0);
  std::vector<int> order{root};
  std::vector<char> seen(static_cast<std::size_t>(graph.n()), 0);
  seen[static_cast<std::size_t>(root)] = 1;
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int w : graph.neighbors(order[k]))
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        parent[static_cast<std::size_t>(w)] = order[k];
        depth[static_cast<std::size_t>(w)] = depth[static_cast<std::size_t>(order[k])] + 1;
        order.push_back(w);
      }

  BranchSpace sp;
  sp.d = g.d();
  sp.b = g.b();
  const std::uint64_t b = static_cast<std::uint64_t>(g.b());
  for (const auto& s : sequences_up_to(static_cast<std::size_t>(g.d()), g.b())) {
    Fork f{BranchKind::Tine, s, {}, {}};
    for (int i = 0; i <= static_cast<int>(seq_rank(s, g.b())) + 2; ++i) {
      f.points.push_back(static_cast<int>(sp.points.size()));
      sp.points.push_back({BranchKind::Tine, s, i, {}, g.vertex({GadgetKind::Tine, s, i, i, {}, {}}), static_cast<int>(sp.forks.size())});
    }
    sp.forks.push_back(std::move(f));
  }
  auto nodes = g.provenance.nodes();
  std::sort(nodes.begin(), nodes.end(), [&](const auto& x, const auto& y) {
    return std::make_pair(length_lex_rank(x.s, b), theta(x.u[0])) < std::make_pair(length_lex_rank(y.s, b), theta(y.u[0]));
  });
  for (const auto& n : nodes) {
    const Seq& u = n.u[0];
    const std::size_t len = 2 * theta(u) + 4;
    Seq side(len - 2, 0);
    side.push_back(1);
    Fork f{BranchKind::Code, n.s, u, {}};
    for (int i = 0; i < 2; ++i) {
      f.points.push_back(static_cast<int>(sp.points.size()));
      int leaf = g.vertex({GadgetKind::Code, n.s, 0, 0, u, i == 0 ? Seq(len, 0) : side});
      sp.points.push_back({BranchKind::Code, n.s, i, u, leaf, static_cast<int>(sp.forks.size())});
    }
    sp.forks.push_back(std::move(f));
  }

  const int n = static_cast<int>(sp.points.size());
  sp.metric = FiniteMetric(n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      int p = sp.points[static_cast<std::size_t>(x)].leaf, q = sp.points[static_cast<std::size_t>(y)].leaf;
      while (depth[static_cast<std::size_t>(p)] > depth[static_cast<std::size_t>(q)]) p = parent[static_cast<std::size_t>(p)];
      while (depth[static_cast<std::size_t>(q)] > depth[static_cast<std::size_t>(p)]) q = parent[static_cast<std::size_t>(q)];
      while (p != q) {
        p = parent[static_cast<std::size_t>(p)];
        q = parent[static_cast<std::size_t>(q)];
      }
      // Shared vertices: depth(lca) + 1 = n + 1.
      sp.metric.set(x, y, inverse_power_of_two(static_cast<unsigned>(depth[static_cast<std::size_t>(p)])));
    }

  std::vector<int> bs, cs;
  for (int x = 0; x < n; ++x) (sp.points[static_cast<std::size_t>(x)].kind == BranchKind::Tine ? bs : cs).push_back(x);
  auto spine = sequences_up_to(static_cast<std::size_t>(g.d()), g.b());
  std::size_t top = std::max({3 * spine.size(), 3 * bs.size() + 1, 3 * cs.size() + 2});
  sp.slots.assign(top, -1);
  for (const auto& s : spine) sp.slots[3 * length_lex_rank(s, b)] = sp.spine_representative(s);
  for (std::size_t k = 0; k < bs.size(); ++k) sp.slots[3 * k + 1] = bs[k];
  for (std::size_t k = 0; k < cs.size(); ++k) sp.slots[3 * k + 2] = cs[k];
  return sp;
}

// Isometric embedding U_{G_S} -> U_{G_T'} induced by a <=max witness, where
// T' is T presented at the enlarged bound of the injective witness: the
// branch ending at leaf v goes to the branch ending at the image of v.
struct BranchEmbedding {
  BranchSpace target;
  LipschitzMap f;
  VertexMap map;
};

inline BranchEmbedding branch_embedding_from_witness(const FiniteNormalTree& s, const FiniteNormalTree& t, const LipschitzMap& f0,
                                                     const Budget& budget = default_budget()) {
  auto w = canonical_injective_witness(s, t, f0);
  auto gs = build_gadget(s, budget);
  auto gt = build_gadget(w.target, budget);
  auto vertex_map = induced_gadget_map(gs, gt, w.f);
  BranchEmbedding out{build_branch_space(gt), w.f, {}};
  auto src = build_branch_space(gs);
  std::map<int, int> by_leaf;
  for (std::size_t p = 0; p < out.target.points.size(); ++p) by_leaf.emplace(out.target.points[p].leaf, static_cast<int>(p));
  for (const auto& p : src.points) out.map.image.push_back(by_leaf.at(vertex_map.image[static_cast<std::size_t>(p.leaf)]));
  return out;
}

// Ball structure over the slot enumeration: elements are (slot, q) for
// filled slots and q in the radius grid, numbered slot-major. R(e, f) iff
// ball(e) is contained in ball(f); Q_r(e) iff diam(ball(e)) < r.
struct BallStructure {
  std::vector<int> slot_ids;     // filled slot indices, ascending
  std::vector<int> slot_points;  // point named by each filled slot
  std::vector<Rational> grid;
  std::vector<Bits> balls;       // per element, the ball as a point set
  std::vector<Rational> diam;    // per element
  std::vector<int> fork;         // per point; empty when there is no fork data

  int size() const noexcept { return static_cast<int>(balls.size()); }
  int point(int e) const { return slot_points[static_cast<std::size_t>(e) / grid.size()]; }
  const Rational& radius(int e) const { return grid[static_cast<std::size_t>(e) % grid.size()]; }
  bool R(int e, int f) const { return balls[static_cast<std::size_t>(e)].is_subset_of(balls[static_cast<std::size_t>(f)]); }
  bool Q(std::size_t r, int e) const { return diam[static_cast<std::size_t>(e)] < grid[r]; }
  // Q_r for every r in the grid: the ball isolates its center.
  bool isolating(int e) const { return balls[static_cast<std::size_t>(e)].count() == 1; }
};

// Radii: every realized distance, the midpoint of each consecutive pair, and
// twice the largest; {1} for a one-point space. B(x, q) is open, so the
// least distance already isolates.
inline std::vector<Rational> radius_grid(const FiniteMetric& m) {
  auto ds = m.distances();
  if (ds.empty()) return {Rational(1)};
  std::vector<Rational> grid;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (k > 0) grid.push_back(Rational((ds[k - 1] + ds[k]) / 2));
    grid.push_back(ds[k]);
  }
  grid.push_back(Rational(ds.back() * 2));
  return grid;
}

namespace detail {

inline BallStructure ball_structure(const FiniteMetric& m, const std::vector<int>& slots, const Budget& budget) {
  BallStructure s;
  s.grid = radius_grid(m);
  for (std::size_t k = 0; k < slots.size(); ++k)
    if (slots[k] >= 0) {
      s.slot_ids.push_back(static_cast<int>(k));
      s.slot_points.push_back(slots[k]);
    }
  budget.check_vertices(s.slot_points.size() * s.grid.size(), "ball structure");
  for (int x : s.slot_points)
    for (const auto& q : s.grid) {
      Bits ball(static_cast<std::size_t>(m.n()));
      for (int y = 0; y < m.n(); ++y)
        if (m.at(x, y) < q) ball.set(static_cast<std::size_t>(y));
      Rational dm = 0;
      for (auto p = ball.find_first(); p != Bits::npos; p = ball.find_next(p))
        for (auto r = ball.find_next(p); r != Bits::npos; r = ball.find_next(r)) dm = std::max(dm, m.at(static_cast<int>(p), static_cast<int>(r)));
      s.balls.push_back(std::move(ball));
      s.diam.push_back(dm);
    }
  return s;
}

}  // namespace detail

inline BallStructure build_ball_structure(const FiniteMetric& m, const Budget& budget = default_budget()) {
  std::vector<int> slots(static_cast<std::size_t>(m.n()));
  for (int i = 0; i < m.n(); ++i) slots[static_cast<std::size_t>(i)] = i;
  return detail::ball_structure(m, slots, budget);
}

inline BallStructure build_ball_structure(const BranchSpace& sp, const Budget& budget = default_budget()) {
  auto s = detail::ball_structure(sp.metric, sp.slots, budget);
  for (const auto& p : sp.points) s.fork.push_back(p.fork);
  return s;
}

// The structure as one colored structure: vertex color counts the Q_r that
// hold, pair color 1 marks R. Isomorphisms of this are exactly the
// automorphisms / isomorphisms of the ball structures.
inline ColoredStructure to_colored(const BallStructure& s) {
  ColoredStructure c(s.size());
  for (int e = 0; e < s.size(); ++e) {
    int q = 0;
    for (std::size_t r = 0; r < s.grid.size(); ++r) q += s.Q(r, e);
    c.set_vertex_color(e, q);
    for (int f = 0; f < s.size(); ++f)
      if (e != f && s.R(e, f)) c.set_pair(e, f, 1);
  }
  c.finalize();
  return c;
}

// Whether the finite partial map h extends to an automorphism of the ball
// structure of a branch space. The conditions: h is a partial automorphism;
// a ball with two points is sent to a name of the same ball; an isolating
// ball goes to an isolating ball whose point lies in the same fork. A finite
// structure needs one more clause the infinite one gets for free: the two
// isolated points must have equally many names (every point has as many
// names as grid radii isolate it, and the spine representatives carry the
// extra slots 3 rank#(s)).
inline bool can_extend_ball_auto(const BallStructure& s, const std::vector<std::pair<int, int>>& h) {
  if (s.fork.empty()) throw PreconditionError("ball extension needs the fork relation of a branch space");
  std::set<int> dom, img;
  for (auto [x, y] : h) {
    if (x < 0 || y < 0 || x >= s.size() || y >= s.size()) throw PreconditionError("element out of range");
    if (!dom.insert(x).second || !img.insert(y).second) throw PreconditionError("partial map must be injective");
  }
  for (auto [x, y] : h) {
    for (std::size_t r = 0; r < s.grid.size(); ++r)
      if (s.Q(r, x) != s.Q(r, y)) return false;
    for (auto [x2, y2] : h)
      if (s.R(x, x2) != s.R(y, y2)) return false;
  }
  auto names = [&](int e) {
    int count = 0;
    for (int f = 0; f < s.size(); ++f) count += s.balls[static_cast<std::size_t>(f)] == s.balls[static_cast<std::size_t>(e)];
    return count;
  };
  for (auto [x, y] : h) {
    if (!s.isolating(x)) {
      if (!(s.R(x, y) && s.R(y, x))) return false;
      continue;
    }
    if (s.fork[static_cast<std::size_t>(s.point(x))] != s.fork[static_cast<std::size_t>(s.point(y))]) return false;
    if (names(x) != names(y)) return false;
  }
  return true;
}

}  // namespace forge
