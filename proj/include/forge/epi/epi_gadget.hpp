#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/core/budget.hpp"
#include "forge/core/error.hpp"
#include "forge/core/sequences.hpp"
#include "forge/graph/graph.hpp"
#include "forge/graph/refinement.hpp"
#include "forge/graph/search.hpp"

namespace forge {

// Quantifier-free type of a tuple in a graph. The equality pattern is stored
// as a restricted growth string (class of position k, classes numbered in
// order of first appearance); `adjacency` has one bit per pair of classes
// p < q, in lexicographic order of (p, q).
struct QfType {
  int arity = 0;
  std::vector<int> pattern;
  std::uint64_t adjacency = 0;

  int classes() const { return pattern.empty() ? 0 : *std::max_element(pattern.begin(), pattern.end()) + 1; }
  friend bool operator==(const QfType&, const QfType&) = default;
};

namespace detail {

inline int pair_bit(int p, int q, int classes) {
  // Index of (p, q), p < q, among all such pairs in lexicographic order.
  return p * classes - p * (p + 1) / 2 + (q - p - 1);
}

// Restricted growth strings of length n in lexicographic order.
inline const std::vector<std::vector<int>>& growth_strings(int n) {
  static std::map<int, std::vector<std::vector<int>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int top) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= top + 1; ++c) {
      cur.push_back(c);
      self(self, std::max(top, c));
      cur.pop_back();
    }
  };
  rec(rec, -1);
  return cache.emplace(n, std::move(out)).first->second;
}

inline std::uint64_t types_with_classes(int k) { return std::uint64_t{1} << (k * (k - 1) / 2); }

constexpr int kMaxTypeArity = 8;

}  // namespace detail

// |TY_n|: number of quantifier-free n-types of a single binary symmetric
// irreflexive relation.
inline std::uint64_t type_count(int n) {
  if (n < 0 || n > detail::kMaxTypeArity) throw PreconditionError("type arity out of supported range");
  std::uint64_t total = 0;
  for (const auto& g : detail::growth_strings(n)) total += detail::types_with_classes(g.empty() ? 0 : *std::max_element(g.begin(), g.end()) + 1);
  return total;
}

// Least code of an n-type: codes are grouped by arity.
inline std::uint64_t alpha(int n) {
  std::uint64_t total = 0;
  for (int m = 0; m < n; ++m) total += type_count(m);
  return total;
}

inline QfType qf_type(const Graph& g, const std::vector<int>& t) {
  QfType ty;
  ty.arity = static_cast<int>(t.size());
  std::vector<int> reps;
  for (int v : t) {
    if (v < 0 || v >= g.n()) throw PreconditionError("tuple entry is not a vertex");
    auto it = std::find(reps.begin(), reps.end(), v);
    if (it == reps.end()) {
      ty.pattern.push_back(static_cast<int>(reps.size()));
      reps.push_back(v);
    } else {
      ty.pattern.push_back(static_cast<int>(it - reps.begin()));
    }
  }
  const int k = static_cast<int>(reps.size());
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q)
      if (g.has_edge(reps[static_cast<std::size_t>(p)], reps[static_cast<std::size_t>(q)])) ty.adjacency |= std::uint64_t{1} << detail::pair_bit(p, q, k);
  return ty;
}

// Code under the fixed enumeration e: arity first, then the equality pattern
// in lexicographic order, then the adjacency bits read as a number.
inline std::uint64_t type_code(const QfType& ty) {
  std::uint64_t code = alpha(ty.arity);
  for (const auto& g : detail::growth_strings(ty.arity)) {
    if (g == ty.pattern) return code + ty.adjacency;
    code += detail::types_with_classes(g.empty() ? 0 : *std::max_element(g.begin(), g.end()) + 1);
  }
  throw PreconditionError("equality pattern is not a restricted growth string");
}

inline std::uint64_t type_code(const Graph& g, const std::vector<int>& t) { return type_code(qf_type(g, t)); }

// Inverse of type_code.
inline QfType type_of_code(std::uint64_t code) {
  int n = 0;
  while (code >= type_count(n)) code -= type_count(n++);
  for (const auto& g : detail::growth_strings(n)) {
    int k = g.empty() ? 0 : *std::max_element(g.begin(), g.end()) + 1;
    if (code < detail::types_with_classes(k)) return QfType{n, g, code};
    code -= detail::types_with_classes(k);
  }
  throw PreconditionError("type code out of range");  // unreachable
}

// Type code of the index sequence t read as a tuple of vertices of G, with
// entries reduced mod |G| so that every truncated index is meaningful.
inline std::uint64_t block_type(const Graph& g, const Seq& t) {
  if (g.n() == 0) throw PreconditionError("graph must be nonempty");
  std::vector<int> tuple;
  for (int x : t) tuple.push_back(x % g.n());
  return type_code(g, tuple);
}

enum class EpiKind { A, B, C, D };

inline const char* epi_kind_name(EpiKind k) {
  switch (k) {
    case EpiKind::A: return "a";
    case EpiKind::B: return "b";
    case EpiKind::C: return "c";
    case EpiKind::D: return "d";
  }
  return "?";
}

// a^t (i unused), b_i^{tn} (1 <= i <= n+2), c_i^t and d_i^{tn} (i < b).
struct EpiTag {
  EpiKind kind = EpiKind::A;
  Seq t;
  int i = 0;

  friend auto operator<=>(const EpiTag&, const EpiTag&) = default;
  friend bool operator==(const EpiTag&, const EpiTag&) = default;
};

// The graph G* restricted to blocks N_t, t in {0..b-1}^{<=d}. Blocks are
// numbered in lexicographic (pre-)order of t, and inside a block the
// vertices run a, b_1..b_{n+2}, c_0..c_{b-1}, d_0..d_{b-1}.
struct EpiGadget {
  Graph graph;
  int d = 0;
  int b = 0;
  Graph provenance;
  std::vector<EpiTag> tags;
  std::vector<Seq> blocks;
  std::vector<std::uint64_t> block_types;
  std::map<EpiTag, int> index;

  int vertex(const EpiTag& tag) const {
    auto it = index.find(tag);
    if (it == index.end()) throw PreconditionError(std::string("no such gadget vertex of kind ") + epi_kind_name(tag.kind));
    return it->second;
  }
  int a(const Seq& t) const { return vertex({EpiKind::A, t, 0}); }
};

inline std::uint64_t epi_gadget_vertex_count(const Graph& g, int d, int b) {
  std::uint64_t total = 0;
  for (const auto& t : sequences_preorder(static_cast<std::size_t>(d), b)) total += block_type(g, t) + 3 + 2 * static_cast<std::uint64_t>(b);
  return total;
}

inline EpiGadget build_epi_gadget(const Graph& g, int d, int b, const Budget& budget = default_budget()) {
  if (g.n() == 0) throw PreconditionError("graph must be nonempty");
  if (d < 0 || b < 1) throw PreconditionError("truncation needs d >= 0 and b >= 1");
  budget.check_vertices(static_cast<std::size_t>(epi_gadget_vertex_count(g, d, b)), "epi gadget");
  EpiGadget e;
  e.d = d;
  e.b = b;
  e.provenance = g;
  std::vector<std::pair<int, int>> edges;
  auto add = [&](EpiTag tag) {
    int v = static_cast<int>(e.tags.size());
    e.index.emplace(tag, v);
    e.tags.push_back(std::move(tag));
    return v;
  };
  auto clique = [&](const std::vector<int>& vs) {
    for (std::size_t x = 0; x < vs.size(); ++x)
      for (std::size_t y = x + 1; y < vs.size(); ++y) edges.emplace_back(vs[x], vs[y]);
  };
  for (const auto& t : sequences_preorder(static_cast<std::size_t>(d), b)) {
    const auto n = block_type(g, t);
    e.blocks.push_back(t);
    e.block_types.push_back(n);
    std::vector<int> bs{add({EpiKind::A, t, 0})};
    for (int j = 1; j <= static_cast<int>(n) + 2; ++j) bs.push_back(add({EpiKind::B, t, j}));
    std::vector<int> cs;
    for (int i = 0; i < b; ++i) cs.push_back(add({EpiKind::C, t, i}));
    for (int i = 0; i < b; ++i) cs.push_back(add({EpiKind::D, t, i}));
    clique(bs);
    clique(cs);
    for (int c : cs) edges.emplace_back(bs.back(), c);
  }
  for (const auto& t : e.blocks) {
    if (t.empty()) continue;
    Seq parent(t.begin(), t.end() - 1);
    edges.emplace_back(e.vertex({EpiKind::C, parent, t.back()}), e.a(t));
  }
  e.graph = Graph(static_cast<int>(e.tags.size()), edges);
  return e;
}

inline std::uint64_t saturating_factorial(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 2; k <= n; ++k) {
    if (r > UINT64_MAX / k) return UINT64_MAX;
    r *= k;
  }
  return r;
}

// Prod_t (tau(t)+1)! * b!: the order predicted by counting only the
// interchangeable sets {b_1..b_{n+1}} and {d_i} of every block.
inline std::uint64_t aut_product_formula(const EpiGadget& e) {
  std::uint64_t r = 1;
  for (auto n : e.block_types)
    for (std::uint64_t f : {saturating_factorial(n + 1), saturating_factorial(static_cast<std::uint64_t>(e.b))}) {
      if (r > UINT64_MAX / f) return UINT64_MAX;
      r *= f;
    }
  return r;
}

// A vertex lies in a unique maximal clique exactly when its neighbourhood is
// a clique; that clique is then its closed neighbourhood.
inline bool in_unique_maximal_clique(const Graph& g, int v) {
  auto nb = g.neighbors(v);
  for (std::size_t x = 0; x < nb.size(); ++x)
    for (std::size_t y = x + 1; y < nb.size(); ++y)
      if (!g.has_edge(nb[x], nb[y])) return false;
  return true;
}

// Simple automorphisms move a vertex only inside its unique maximal clique.
// Two such vertices in the same clique have the same closed neighbourhood,
// so the group is the direct product of the symmetric groups on these
// classes; generators are adjacent transpositions.
inline AutomorphismGroup simple_automorphism_group(const Graph& g) {
  const int n = g.n();
  std::map<std::vector<int>, std::vector<int>> classes;
  for (int v = 0; v < n; ++v) {
    if (!in_unique_maximal_clique(g, v) || g.degree(v) == 0) continue;
    auto closed = g.neighbors(v);
    closed.push_back(v);
    std::sort(closed.begin(), closed.end());
    classes[closed].push_back(v);
  }
  AutomorphismGroup group;
  for (const auto& [clique, members] : classes) {
    for (std::size_t k = 0; k + 1 < members.size(); ++k) {
      auto perm = identity_map(n).image;
      std::swap(perm[static_cast<std::size_t>(members[k])], perm[static_cast<std::size_t>(members[k + 1])]);
      group.generators.push_back(std::move(perm));
      group.base.push_back(members[k]);
      group.orbit_lengths.push_back(members.size() - k);
    }
    std::uint64_t f = saturating_factorial(members.size());
    group.order = (group.order > UINT64_MAX / f) ? UINT64_MAX : group.order * f;
  }
  return group;
}

inline AutomorphismGroup simple_automorphism_group(const EpiGadget& e) { return simple_automorphism_group(e.graph); }

// Whether some simple automorphism sends i to a[i] for every i < |a|, by the
// condition list: adjacency among 0..|a|-1 is mirrored, and each moved point
// and its image lie in unique maximal cliques and are adjacent.
inline bool can_extend_simple(const Graph& g, const std::vector<int>& a) {
  const int k = static_cast<int>(a.size());
  if (k > g.n()) throw PreconditionError("sequence longer than the vertex set");
  for (int v : a)
    if (v < 0 || v >= g.n()) throw PreconditionError("sequence entry is not a vertex");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (a[static_cast<std::size_t>(i)] == a[static_cast<std::size_t>(j)]) throw PreconditionError("sequence must be injective");
  for (int i = 0; i < k; ++i) {
    int ai = a[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j)
      if (i != j && g.has_edge(i, j) != g.has_edge(ai, a[static_cast<std::size_t>(j)])) return false;
    if (i == ai) continue;
    if (!in_unique_maximal_clique(g, i) || !in_unique_maximal_clique(g, ai) || !g.has_edge(i, ai)) return false;
  }
  return true;
}

inline bool can_extend_simple(const EpiGadget& e, const std::vector<int>& a) { return can_extend_simple(e.graph, a); }

// Forward direction of the reduction at truncation. Given an embedding f of
// G into H, look for a permutation phi of {0..b-1} with
// phi(x) = f(x mod |G|) (mod |H|); then t -> phi(t) matches blocks of equal
// type and induces an isomorphism gamma: H* -> G*, in particular a
// vertex-surjective edge-preserving map. None when no such phi exists.
inline std::optional<VertexMap> forward_epi_witness(const EpiGadget& gs, const EpiGadget& hs, const VertexMap& f) {
  if (gs.d != hs.d || gs.b != hs.b) throw PreconditionError("gadgets must share the truncation");
  if (!is_embedding(gs.provenance, hs.provenance, f)) throw PreconditionError("f is not an embedding of G into H");
  const int b = gs.b, ng = gs.provenance.n(), nh = hs.provenance.n();
  std::vector<int> phi(static_cast<std::size_t>(b), -1);
  std::vector<char> used(static_cast<std::size_t>(b), 0);
  for (int x = 0; x < b; ++x) {
    int want = f.image[static_cast<std::size_t>(x % ng)];
    for (int y = want; y < b; y += nh)
      if (!used[static_cast<std::size_t>(y)]) {
        phi[static_cast<std::size_t>(x)] = y;
        used[static_cast<std::size_t>(y)] = 1;
        break;
      }
    if (phi[static_cast<std::size_t>(x)] < 0) return std::nullopt;
  }
  std::vector<int> inv(static_cast<std::size_t>(b));
  for (int x = 0; x < b; ++x) inv[static_cast<std::size_t>(phi[static_cast<std::size_t>(x)])] = x;
  VertexMap gamma;
  gamma.image.assign(static_cast<std::size_t>(hs.graph.n()), -1);
  for (std::size_t v = 0; v < hs.tags.size(); ++v) {
    EpiTag tag = hs.tags[v];
    for (int& x : tag.t) x = inv[static_cast<std::size_t>(x)];
    if (tag.kind == EpiKind::C) tag.i = inv[static_cast<std::size_t>(tag.i)];
    gamma.image[v] = gs.vertex(tag);
  }
  return gamma;
}

struct EpiBridgeReport {
  std::size_t instances = 0;
  // Pairs (i, j) of corpus indices where the biconditional fails.
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  bool ok() const { return violations.empty(); }
};

// G iso H exactly when G* iso H*, over all ordered pairs of the corpus.
inline EpiBridgeReport verify_iso_bridge(const std::vector<Graph>& corpus, int d, int b, const Budget& budget = default_budget()) {
  std::vector<EpiGadget> gadgets;
  for (const auto& g : corpus) gadgets.push_back(build_epi_gadget(g, d, b, budget));
  EpiBridgeReport rep;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      ++rep.instances;
      bool base = corpus[i].n() == corpus[j].n() && find_isomorphism(corpus[i], corpus[j], budget).has_value();
      // Equal gadgets are isomorphic via the identity; skipping the search
      // there avoids individualizing every twin class of a large gadget.
      const Graph& x = gadgets[i].graph;
      const Graph& y = gadgets[j].graph;
      bool lifted = x == y || (x.n() == y.n() && find_isomorphism(x, y, budget).has_value());
      if (base != lifted) rep.violations.emplace_back(i, j);
    }
  return rep;
}

}  // namespace forge
