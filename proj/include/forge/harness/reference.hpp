#pragma once

// Deliberately slow reference implementations. The harness suites and the
// unit tests compare the library against these; they share no search code
// with the modules they check.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "forge/core/lp.hpp"
#include "forge/graph/graph.hpp"
#include "forge/norm/graph_norm.hpp"
#include "forge/orders/colored_orders.hpp"
#include "forge/graph/refinement.hpp"
#include "forge/graph/search.hpp"
#include "forge/trees/le_max.hpp"
#include "forge/trees/normal_form.hpp"
#include "forge/trees/normal_tree.hpp"

namespace forge::reference {

using forge::FiniteNormalTree;
using forge::FiniteNormalTree3;
using forge::Seq;

inline Seq clipped_sum(const Seq& s, const Seq& t, int b) {
  Seq out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = std::min(s[i] + t[i], b - 1);
  return out;
}

// Triple loop over the node list.
inline forge::NormalFormReport naive_normal_form(const FiniteNormalTree3& tree) {
  forge::NormalFormReport rep{true, true, true};
  auto nodes = tree.nodes();
  for (int k = 0; k <= tree.depth(); ++k)
    for (const auto& u : forge::sequences_of_length(static_cast<std::size_t>(k), 2))
      for (const auto& s : forge::sequences_of_length(static_cast<std::size_t>(k), tree.bound()))
        if (!tree.contains(u, u, s)) rep.reflexive = false;
  for (const auto& a : nodes) {
    bool zero = std::all_of(a.s.begin(), a.s.end(), [](int x) { return x == 0; });
    if (zero && a.u[0] != a.u[1]) rep.antisymmetric = false;
    for (const auto& c : nodes) {
      if (c.s.size() != a.s.size() || c.u[0] != a.u[1]) continue;
      if (!tree.contains(a.u[0], c.u[1], clipped_sum(a.s, c.s, tree.bound()))) rep.transitive = false;
    }
  }
  return rep;
}

// Transitive closure by fixpoint iteration over explicit node sets.
inline std::set<std::vector<Seq>> transitive_closure(const FiniteNormalTree3& tree) {
  std::set<std::vector<Seq>> cur;
  for (const auto& n : tree.nodes()) cur.insert({n.u[0], n.u[1], n.s});
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::vector<Seq>> add;
    for (const auto& a : cur)
      for (const auto& c : cur)
        if (a[2].size() == c[2].size() && a[1] == c[0]) {
          std::vector<Seq> t{a[0], c[1], clipped_sum(a[2], c[2], tree.bound())};
          if (!cur.count(t)) add.push_back(t);
        }
    for (auto& t : add) grew |= cur.insert(t).second;
  }
  return cur;
}

inline bool closed_under_transitivity(const FiniteNormalTree3& tree) { return transitive_closure(tree).size() == tree.size(); }

// Every Lipschitz map from the projection of S into {0..bT-1}^{<=d}; returns
// the first valid witness in the enumeration order, or none.
inline std::optional<forge::LipschitzMap> le_max_brute(const FiniteNormalTree& s, const FiniteNormalTree& t) {
  auto proj = s.s_projection();  // length-lex, parents first
  forge::LipschitzMap f;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == proj.size()) return forge::is_valid_witness(s, t, f);
    const Seq& x = proj[i];
    if (x.empty()) {
      f[x] = Seq{};
      return rec(i + 1);
    }
    Seq base = f.at(forge::prefix(x, x.size() - 1));
    for (int v = 0; v < t.bound(); ++v) {
      Seq y = base;
      y.push_back(v);
      f[x] = y;
      if (rec(i + 1)) return true;
    }
    f.erase(x);
    return false;
  };
  if (rec(0)) return f;
  return std::nullopt;
}

// Membership of (u, target) in the upward closure of T, by explicit search.
inline bool in_upward_closure(const FiniteNormalTree& t, const Seq& u, const Seq& target) {
  for (const auto& n : t.nodes())
    if (n.u[0] == u && forge::pointwise_leq(n.s, target)) return true;
  return false;
}


// A random valid tree: random generator nodes, closed under prefixes and
// then upward in s. `density` is the chance of picking each frame node.
template <int Arity>
forge::NormalTree<Arity> random_tree(int d, int b, double density, std::mt19937_64& rng) {
  forge::NormalTree<Arity> t(d, b);
  std::bernoulli_distribution coin(density);
  for (const auto& n : t.frame()) {
    if (!n.s.empty() && !coin(rng)) continue;
    for (std::size_t k = 0; k <= n.s.size(); ++k) {
      typename forge::NormalTree<Arity>::Coords pu;
      for (int j = 0; j < Arity; ++j) pu[static_cast<std::size_t>(j)] = forge::prefix(n.u[static_cast<std::size_t>(j)], k);
      t.insert(pu, forge::prefix(n.s, k));
    }
  }
  for (const auto& n : t.nodes()) {
    // Raise every entry to every value above it.
    for (const auto& up : forge::sequences_of_length(n.s.size(), b))
      if (forge::pointwise_leq(n.s, up)) t.insert(n.u, up);
  }
  return t;
}

// Maximal cliques by extending every clique in increasing vertex order.
inline std::vector<std::vector<int>> maximal_cliques(const forge::Graph& g) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int from) {
    bool maximal = true;
    for (int v = 0; v < g.n() && maximal; ++v)
      if (std::find(cur.begin(), cur.end(), v) == cur.end() &&
          std::all_of(cur.begin(), cur.end(), [&](int w) { return g.has_edge(v, w); }))
        maximal = false;
    if (maximal) out.push_back(cur);
    for (int v = from; v < g.n(); ++v)
      if (std::all_of(cur.begin(), cur.end(), [&](int w) { return g.has_edge(v, w); })) {
        cur.push_back(v);
        rec(v + 1);
        cur.pop_back();
      }
  };
  rec(0);
  return out;
}

// Definition check: every moved u lies in exactly one maximal clique, which
// also contains its image.
inline bool is_simple_permutation(const std::vector<std::vector<int>>& cliques, const std::vector<int>& perm) {
  for (int u = 0; u < static_cast<int>(perm.size()); ++u) {
    if (perm[static_cast<std::size_t>(u)] == u) continue;
    const std::vector<int>* home = nullptr;
    int count = 0;
    for (const auto& c : cliques)
      if (std::find(c.begin(), c.end(), u) != c.end()) {
        home = &c;
        ++count;
      }
    if (count != 1 || std::find(home->begin(), home->end(), perm[static_cast<std::size_t>(u)]) == home->end()) return false;
  }
  return true;
}

// Every element of the group generated by `gens`, by closure.
inline std::set<std::vector<int>> group_elements(const std::vector<std::vector<int>>& gens, int n) {
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    auto p = frontier.back();
    frontier.pop_back();
    for (const auto& g : gens) {
      std::vector<int> q(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
      if (seen.insert(q).second) frontier.push_back(q);
    }
  }
  return seen;
}

// Prefixes (p(0), .., p(k-1)), k <= max_len, over all simple automorphisms
// p of g, found by filtering the full automorphism group.
inline std::set<std::vector<int>> simple_extension_prefixes(const forge::Graph& g, int max_len) {
  auto cliques = maximal_cliques(g);
  std::set<std::vector<int>> out;
  for (const auto& p : group_elements(forge::automorphisms(g).generators, g.n())) {
    if (!is_simple_permutation(cliques, p)) continue;
    for (int k = 0; k <= std::min(max_len, g.n()); ++k) out.insert(std::vector<int>(p.begin(), p.begin() + k));
  }
  return out;
}

// All injective sequences of length <= max_len over 0..n-1.
inline std::vector<std::vector<int>> injective_sequences(int n, int max_len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void()> rec = [&] {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int v = 0; v < n; ++v)
      if (std::find(cur.begin(), cur.end(), v) == cur.end()) {
        cur.push_back(v);
        rec();
        cur.pop_back();
      }
  };
  rec();
  return out;
}

// Relabels g by the permutation p (vertex v becomes p[v]).
inline forge::Graph relabel(const forge::Graph& g, const std::vector<int>& p) {
  forge::Graph h(g.n());
  for (auto [i, j] : g.edges()) h.add_edge(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  return h;
}

// Every non-decreasing block assignment, checked against the embedding
// criterion restated here; returns the first one that passes.
inline std::optional<forge::BlockAssignment> colored_embeds_naive(const forge::ColoredOrdinalSum& a, const forge::ColoredOrdinalSum& b,
                                                                  const forge::ColorRelation& r) {
  forge::BlockAssignment phi;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
    if (phi.size() == a.size()) {
      for (std::size_t i = 0; i < phi.size(); ++i) {
        const auto& s = a.blocks[i];
        const auto& t = b.blocks[phi[i]];
        if (!r.holds(s.color, t.color) || s.exponent > t.exponent) return false;
        if (i + 1 < phi.size() && phi[i + 1] == phi[i] && !(s.exponent < t.exponent)) return false;
      }
      return true;
    }
    for (std::size_t j = from; j < b.size(); ++j) {
      phi.push_back(j);
      if (rec(j)) return true;
      phi.pop_back();
    }
    return false;
  };
  if (rec(0)) return phi;
  return std::nullopt;
}

// max c.x over {A x <= b, x >= 0} by trying every basis: each choice of
// n tight constraints among the rows and the coordinate planes. Requires a
// bounded feasible region; none when it is empty.
inline std::optional<forge::Rational> lp_max_by_vertices(const forge::RationalMatrix& a, const std::vector<forge::Rational>& b,
                                                         const std::vector<forge::Rational>& c) {
  const std::size_t n = c.size();
  forge::RationalMatrix rows = a;
  std::vector<forge::Rational> rhs = b;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<forge::Rational> r(n, forge::Rational(0));
    r[j] = -1;
    rows.push_back(r);
    rhs.push_back(0);
  }
  std::optional<forge::Rational> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (pick.size() == n) {
      forge::RationalMatrix m;
      std::vector<forge::Rational> v;
      for (auto r : pick) {
        m.push_back(rows[r]);
        v.push_back(rhs[r]);
      }
      auto x = forge::solve_linear(m, v);
      if (!x) return;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        forge::Rational lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += rows[r][j] * (*x)[j];
        if (lhs > rhs[r]) return;
      }
      forge::Rational val = 0;
      for (std::size_t j = 0; j < n; ++j) val += c[j] * (*x)[j];
      if (!best || val > *best) best = val;
      return;
    }
    for (std::size_t r = from; r < rows.size(); ++r) {
      pick.push_back(r);
      rec(r + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

// Every permutation H of the points of S(X_G) keeping all probe values,
// value(alpha, k) == value(alpha, H o k). Tuples with a zero coefficient
// repeat a shorter tuple's value and are skipped. Pairs prune the search;
// triples are checked on complete permutations.
inline std::vector<std::vector<int>> norm_automorphisms(const forge::NormStructure& s) {
  const int m = s.points();
  std::vector<std::size_t> pairs, triples;
  for (std::size_t c = 0; c < s.coefficients.size(); ++c) {
    const auto& co = s.coefficients[c];
    if (std::find(co.begin(), co.end(), forge::Rational(0)) != co.end()) continue;
    (co.size() == 3 ? triples : pairs).push_back(c);
  }
  std::vector<int> h(static_cast<std::size_t>(m), -1);
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  auto image = [&](const std::vector<int>& t) {
    std::vector<int> out;
    for (int x : t) out.push_back(h[static_cast<std::size_t>(x)]);
    return out;
  };
  auto pairs_ok = [&](int k) {
    for (auto c : pairs) {
      if (s.coefficients[c].size() == 1) {
        if (s.value(c, {k}) != s.value(c, image({k}))) return false;
        continue;
      }
      for (int j = 0; j <= k; ++j)
        for (const auto& t : {std::vector<int>{j, k}, std::vector<int>{k, j}})
          if (s.value(c, t) != s.value(c, image(t))) return false;
    }
    return true;
  };
  auto triples_ok = [&] {
    for (auto c : triples)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          for (int z = 0; z < m; ++z) {
            std::vector<int> t{x, y, z};
            if (s.value(c, t) != s.value(c, image(t))) return false;
          }
    return true;
  };
  std::vector<std::vector<int>> out;
  std::function<void(int)> rec = [&](int k) {
    if (k == m) {
      if (triples_ok()) out.push_back(h);
      return;
    }
    for (int y = 0; y < m; ++y) {
      if (used[static_cast<std::size_t>(y)]) continue;
      h[static_cast<std::size_t>(k)] = y;
      used[static_cast<std::size_t>(y)] = 1;
      if (pairs_ok(k)) rec(k + 1);
      used[static_cast<std::size_t>(y)] = 0;
    }
    h[static_cast<std::size_t>(k)] = -1;
  };
  rec(0);
  return out;
}

// Seeded instance generators shared by the suites and the tests.

inline forge::ColoredOrdinalSum random_sum(std::mt19937_64& rng, std::size_t max_blocks = 6, std::uint64_t max_exp = 4, std::uint64_t colors = 3) {
  std::uniform_int_distribution<std::size_t> len(0, max_blocks);
  std::uniform_int_distribution<std::uint64_t> ex(0, max_exp), col(0, colors - 1);
  forge::ColoredOrdinalSum s;
  for (std::size_t k = len(rng); k > 0; --k) s.blocks.push_back({ex(rng), col(rng)});
  return s;
}

inline forge::ColorRelation random_table(std::mt19937_64& rng, std::size_t m) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<bool>> rows(m, std::vector<bool>(m));
  for (auto& r : rows)
    for (std::size_t y = 0; y < m; ++y) r[y] = coin(rng);
  return forge::ColorRelation::table(rows);
}

// Entries num/den with |num| <= 12, 1 <= den <= 6.
inline forge::RationalVector random_vector(int n, std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-12, 12), den(1, 6);
  forge::RationalVector v;
  for (int i = 0; i < n; ++i) v.push_back(forge::make_rational(num(rng), den(rng)));
  return v;
}

inline forge::Graph random_graph(int n, std::mt19937& rng) {
  forge::Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 2) g.add_edge(i, j);
  return g;
}

// Orbit representative of every element of a colored structure under its
// automorphisms, one pinned isomorphism search per (element, representative).
inline std::vector<int> structure_orbits(const forge::ColoredStructure& cs, int n) {
  std::vector<int> reps, orbit(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    orbit[static_cast<std::size_t>(x)] = x;
    for (int r : reps)
      if (forge::find_structure_isomorphism(cs, cs, {{x, r}})) {
        orbit[static_cast<std::size_t>(x)] = r;
        break;
      }
    if (orbit[static_cast<std::size_t>(x)] == x) reps.push_back(x);
  }
  return orbit;
}

}  // namespace forge::reference
