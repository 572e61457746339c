#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/core/budget.hpp"
#include "forge/core/error.hpp"
#include "forge/core/sequences.hpp"
#include "forge/graph/graph.hpp"
#include "forge/graph/search.hpp"
#include "forge/trees/le_max.hpp"
#include "forge/trees/normal_tree.hpp"

namespace forge {

// theta: length-lex rank of a bit string (increasing in length).
inline std::uint64_t theta(const Seq& u) { return length_lex_rank(u, 2); }
// rank#: length-lex rank of s over {0..b-1}.
inline std::uint64_t seq_rank(const Seq& s, int b) { return length_lex_rank(s, static_cast<std::uint64_t>(b)); }

enum class GadgetKind { Seq, Star, Plus, PlusPlus, Tine, Code };

inline const char* kind_name(GadgetKind k) {
  switch (k) {
    case GadgetKind::Seq: return "Seq";
    case GadgetKind::Star: return "Star";
    case GadgetKind::Plus: return "Plus";
    case GadgetKind::PlusPlus: return "PlusPlus";
    case GadgetKind::Tine: return "Tine";
    case GadgetKind::Code: return "Code";
  }
  return "?";
}

// Tag of one gadget vertex. Unused fields stay empty / zero:
//   Seq(s), Star(s), Plus(s), PlusPlus(s), Tine(s,i,j), Code(u,s,x).
struct GadgetTag {
  GadgetKind kind = GadgetKind::Seq;
  Seq s;
  int i = 0;
  int j = 0;
  Seq u;
  Seq x;

  friend auto operator<=>(const GadgetTag&, const GadgetTag&) = default;
  friend bool operator==(const GadgetTag&, const GadgetTag&) = default;
};

struct GadgetGraph {
  Graph graph;
  std::vector<GadgetTag> tags;
  FiniteNormalTree provenance;
  std::map<GadgetTag, int> index;

  int d() const { return provenance.depth(); }
  int b() const { return provenance.bound(); }

  int vertex(const GadgetTag& tag) const {
    auto it = index.find(tag);
    if (it == index.end()) throw PreconditionError(std::string("no such gadget vertex of kind ") + kind_name(tag.kind));
    return it->second;
  }
  int seq_vertex(const Seq& s) const { return vertex(GadgetTag{GadgetKind::Seq, s, 0, 0, {}, {}}); }
};

// Number of vertices of G_T computed from the parameters, without building.
inline std::uint64_t gadget_vertex_count(const FiniteNormalTree& t) {
  const std::uint64_t spine = count_shorter(static_cast<std::uint64_t>(t.bound()), static_cast<std::size_t>(t.depth()) + 1);
  std::uint64_t total = spine + (spine - 1) + 2 * spine;
  for (std::uint64_t r = 0; r < spine; ++r) total += (r + 3) * (r + 4) / 2;
  for (const auto& n : t.nodes()) total += 2 * theta(n.u[0]) + 6;
  return total;
}

// The gadget tree G_T: the spine {0..b-1}^{<=d} with edges subdivided by
// Star vertices, a Plus-PlusPlus pendant at every spine vertex carrying
// tines of lengths 1..rank#(s)+3, and for every (u, s) in T a code path of
// length 2 theta(u) + 4 hanging from Seq(s) with a side leaf one step
// before its end. Vertices are numbered kind-major, then lexicographically
// (sequences in length-lex order).
inline GadgetGraph build_gadget(const FiniteNormalTree& t, const Budget& budget = default_budget()) {
  if (auto why = t.validate()) throw PreconditionError("build_gadget: " + *why);
  const std::uint64_t expected = gadget_vertex_count(t);
  budget.check_vertices(static_cast<std::size_t>(expected), "gadget graph");
  const int b = t.bound();
  auto spine = sequences_up_to(static_cast<std::size_t>(t.depth()), b);

  GadgetGraph g;
  g.provenance = t;
  auto add = [&](GadgetTag tag) {
    g.index.emplace(tag, static_cast<int>(g.tags.size()));
    g.tags.push_back(std::move(tag));
  };
  for (const auto& s : spine) add({GadgetKind::Seq, s, 0, 0, {}, {}});
  for (const auto& s : spine)
    if (!s.empty()) add({GadgetKind::Star, s, 0, 0, {}, {}});
  for (const auto& s : spine) add({GadgetKind::Plus, s, 0, 0, {}, {}});
  for (const auto& s : spine) add({GadgetKind::PlusPlus, s, 0, 0, {}, {}});
  for (const auto& s : spine) {
    const int top = static_cast<int>(seq_rank(s, b)) + 2;
    for (int i = 0; i <= top; ++i)
      for (int j = 0; j <= i; ++j) add({GadgetKind::Tine, s, i, j, {}, {}});
  }
  for (const auto& n : t.nodes()) {
    const std::size_t len = 2 * theta(n.u[0]) + 4;
    for (std::size_t k = 0; k <= len; ++k) add({GadgetKind::Code, n.s, 0, 0, n.u[0], Seq(k, 0)});
    Seq side(len - 2, 0);
    side.push_back(1);
    add({GadgetKind::Code, n.s, 0, 0, n.u[0], side});
  }
  if (g.tags.size() != expected) throw Error("gadget vertex count disagrees with its formula");

  g.graph = Graph(static_cast<int>(g.tags.size()));
  auto at = [&](GadgetKind k, const Seq& s, int i = 0, int j = 0, const Seq& u = {}, const Seq& x = {}) {
    return g.index.at(GadgetTag{k, s, i, j, u, x});
  };
  for (const auto& s : spine) {
    if (!s.empty()) {
      int star = at(GadgetKind::Star, s);
      g.graph.add_edge(at(GadgetKind::Seq, prefix(s, s.size() - 1)), star);
      g.graph.add_edge(star, at(GadgetKind::Seq, s));
    }
    g.graph.add_edge(at(GadgetKind::Seq, s), at(GadgetKind::Plus, s));
    g.graph.add_edge(at(GadgetKind::Plus, s), at(GadgetKind::PlusPlus, s));
    const int top = static_cast<int>(seq_rank(s, b)) + 2;
    for (int i = 0; i <= top; ++i) {
      g.graph.add_edge(at(GadgetKind::PlusPlus, s), at(GadgetKind::Tine, s, i, 0));
      for (int j = 0; j < i; ++j) g.graph.add_edge(at(GadgetKind::Tine, s, i, j), at(GadgetKind::Tine, s, i, j + 1));
    }
  }
  for (const auto& n : t.nodes()) {
    const Seq& u = n.u[0];
    const std::size_t len = 2 * theta(u) + 4;
    g.graph.add_edge(at(GadgetKind::Seq, n.s), at(GadgetKind::Code, n.s, 0, 0, u, Seq{}));
    for (std::size_t k = 0; k < len; ++k)
      g.graph.add_edge(at(GadgetKind::Code, n.s, 0, 0, u, Seq(k, 0)), at(GadgetKind::Code, n.s, 0, 0, u, Seq(k + 1, 0)));
    Seq side(len - 2, 0);
    side.push_back(1);
    g.graph.add_edge(at(GadgetKind::Code, n.s, 0, 0, u, Seq(len - 2, 0)), at(GadgetKind::Code, n.s, 0, 0, u, side));
  }
  return g;
}

// The vertex map G_S -> G_T induced by a Lipschitz f defined on the whole
// spine of G_S: s, s*, s+, s++ go to their f(s) counterparts, tines keep
// their (i, j), and code vertices (u, s, x) go to (u, f(s), x). Throws if a
// required target vertex does not exist.
inline VertexMap induced_gadget_map(const GadgetGraph& gs, const GadgetGraph& gt, const LipschitzMap& f) {
  VertexMap m;
  m.image.reserve(gs.tags.size());
  for (const auto& tag : gs.tags) {
    auto it = f.find(tag.s);
    if (it == f.end()) throw PreconditionError("induced_gadget_map: f undefined on the spine");
    GadgetTag image = tag;
    image.s = it->second;
    m.image.push_back(gt.vertex(image));
  }
  return m;
}

struct StructuredWitness {
  int bound = 0;         // bound b' of the lifted target tree
  GadgetGraph target;    // G_{T'} for T presented with bound b'
  LipschitzMap f;        // spine map
  VertexMap map;         // G_S -> G_{T'}
};

namespace detail {

class StructuredSearch {
 public:
  StructuredSearch(const FiniteNormalTree& s, const FiniteNormalTree& t) : s_(s), t_(t) {}

  std::optional<LipschitzMap> run() {
    if (!feasible(Seq{}, Seq{})) return std::nullopt;
    LipschitzMap f;
    f[Seq{}] = Seq{};
    extract(Seq{}, f);
    return f;
  }

 private:
  // Seq(s) may go to Seq(t): rank condition and every code path at s has a
  // matching code path at t, and the children of s can be matched
  // injectively to feasible children of t.
  bool feasible(const Seq& s, const Seq& t) {
    auto key = std::make_pair(s, t);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = seq_rank(s, s_.bound()) <= seq_rank(t, t_.bound()) && (s_.u_mask(s) & ~t_.u_mask(t)) == 0;
    if (ok && s.size() < static_cast<std::size_t>(s_.depth())) {
      std::vector<int> used;
      ok = match(s, t, 0, used);
    }
    memo_[key] = ok;
    return ok;
  }

  // Assigns children s^i, s^(i+1), ... to distinct feasible children of t;
  // `used` holds the last entries already taken. On success `used` lists
  // the lexicographically least assignment.
  bool match(const Seq& s, const Seq& t, int i, std::vector<int>& used) {
    if (i == s_.bound()) return true;
    Seq cs = s;
    cs.push_back(i);
    for (int v = 0; v < t_.bound(); ++v) {
      if (std::find(used.begin(), used.end(), v) != used.end()) continue;
      Seq ct = t;
      ct.push_back(v);
      if (!feasible(cs, ct)) continue;
      used.push_back(v);
      if (match(s, t, i + 1, used)) return true;
      used.pop_back();
    }
    return false;
  }

  void extract(const Seq& s, LipschitzMap& f) {
    if (s.size() == static_cast<std::size_t>(s_.depth())) return;
    std::vector<int> used;
    match(s, f.at(s), 0, used);
    for (int i = 0; i < s_.bound(); ++i) {
      Seq cs = s, ct = f.at(s);
      cs.push_back(i);
      ct.push_back(used[static_cast<std::size_t>(i)]);
      f[cs] = ct;
      extract(cs, f);
    }
  }

  const FiniteNormalTree& s_;
  const FiniteNormalTree& t_;
  std::map<std::pair<Seq, Seq>, bool> memo_;
};

}  // namespace detail

// Searches for a kind-preserving embedding of G_S into the gadget of T,
// with T presented at the enlarged bound b' = injective_bound(b_S, b_T) (the
// same infinite normal tree, so its gadget is a finite piece of the same
// infinite G_T with room for an injective spine map). Embeddings in the
// searched class are exactly the maps induced by injective, rank-monotone
// Lipschitz f with (u, s) in S => (u, f(s)) in T'; the search over f is
// exhaustive. The returned map is re-validated as an induced embedding.
inline std::optional<StructuredWitness> structured_embed(const GadgetGraph& gs, const GadgetGraph& gt, const Budget& budget = default_budget()) {
  if (gs.d() != gt.d()) throw PreconditionError("structured_embed: gadgets built at different depths");
  const int bound = injective_bound(gs.b(), gt.b());
  FiniteNormalTree lifted = rebound(gt.provenance, bound);
  auto f = detail::StructuredSearch(gs.provenance, lifted).run();
  if (!f) return std::nullopt;
  StructuredWitness w;
  w.bound = bound;
  w.target = build_gadget(lifted, budget);
  w.f = std::move(*f);
  w.map = induced_gadget_map(gs, w.target, w.f);
  if (!is_embedding(gs.graph, w.target.graph, w.map)) throw Error("structured_embed: induced map failed re-validation");
  return w;
}

// Checks a structured witness from scratch: the lifted target is the gadget
// of T at bound b', the map is an induced embedding, and kinds are preserved.
inline bool validate_structured(const GadgetGraph& gs, const GadgetGraph& gt, const StructuredWitness& w) {
  if (w.bound < gt.b()) return false;
  if (!(w.target.provenance == rebound(gt.provenance, w.bound))) return false;
  if (w.map.image.size() != gs.tags.size()) return false;
  if (!is_embedding(gs.graph, w.target.graph, w.map)) return false;
  for (std::size_t v = 0; v < gs.tags.size(); ++v) {
    const auto& a = gs.tags[v];
    const auto& b = w.target.tags[static_cast<std::size_t>(w.map.image[v])];
    if (a.kind != b.kind || a.i != b.i || a.j != b.j || a.u != b.u || a.x != b.x) return false;
  }
  return true;
}

struct PairViolation {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::string detail;
};

struct CorpusReport {
  std::size_t instances = 0;
  std::vector<PairViolation> violations;
  bool ok() const { return violations.empty(); }
};

// G_S isomorphic to G_T exactly when S = T, over all ordered pairs.
inline CorpusReport verify_iso_equality(const std::vector<FiniteNormalTree>& corpus, const Budget& budget = default_budget()) {
  std::vector<GadgetGraph> gadgets;
  for (const auto& t : corpus) gadgets.push_back(build_gadget(t, budget));
  CorpusReport rep;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      ++rep.instances;
      bool iso = find_isomorphism(gadgets[i].graph, gadgets[j].graph, budget).has_value();
      bool eq = corpus[i] == corpus[j];
      if (iso != eq) rep.violations.push_back({i, j, iso ? "isomorphic but different trees" : "equal trees, gadgets not isomorphic"});
    }
  return rep;
}

// Every gadget has only the identity automorphism.
inline CorpusReport verify_rigidity(const std::vector<FiniteNormalTree>& corpus, const Budget& budget = default_budget()) {
  CorpusReport rep;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ++rep.instances;
    auto group = automorphisms(build_gadget(corpus[i], budget).graph, budget);
    if (group.order != 1) rep.violations.push_back({i, i, "automorphism group of order " + std::to_string(group.order)});
  }
  return rep;
}

}  // namespace forge
