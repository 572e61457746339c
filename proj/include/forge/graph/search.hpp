#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "forge/core/budget.hpp"
#include "forge/core/error.hpp"
#include "forge/graph/graph.hpp"
#include "forge/graph/refinement.hpp"

namespace forge {

// Induced embedding test. A non-injective map is simply not an embedding;
// a map that points outside h, or has the wrong length, is malformed.
inline bool is_embedding(const Graph& g, const Graph& h, const VertexMap& m) {
  if (m.image.size() != static_cast<std::size_t>(g.n())) throw MalformedInput("map", "length differs from domain size");
  for (int w : m.image)
    if (w < 0 || w >= h.n()) throw MalformedInput("map", "image vertex " + std::to_string(w) + " out of range");
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j) {
      int a = m.image[static_cast<std::size_t>(i)], b = m.image[static_cast<std::size_t>(j)];
      if (a == b) return false;
      if (g.has_edge(i, j) != h.has_edge(a, b)) return false;
    }
  return true;
}

namespace detail {

class EmbeddingSearch {
 public:
  EmbeddingSearch(const Graph& g, const Graph& h, const Budget& budget) : g_(g), h_(h), counter_(budget) {
    dist_g_ = distance_matrix(g);
    auto dist_h = distance_matrix(h);
    int diam = 0;
    for (const auto& row : dist_h)
      for (int x : row) diam = std::max(diam, x);
    // within_[k][w]: vertices of h at distance <= k from w.
    within_.assign(static_cast<std::size_t>(diam + 1), std::vector<Bits>(static_cast<std::size_t>(h.n()), Bits(static_cast<std::size_t>(h.n()))));
    for (int w = 0; w < h.n(); ++w)
      for (int x = 0; x < h.n(); ++x) {
        int dx = dist_h[static_cast<std::size_t>(w)][static_cast<std::size_t>(x)];
        if (dx < 0) continue;
        for (int k = dx; k <= diam; ++k) within_[static_cast<std::size_t>(k)][static_cast<std::size_t>(w)].set(static_cast<std::size_t>(x));
      }
  }

  std::optional<VertexMap> run() {
    const int n = g_.n();
    std::vector<Bits> domain(static_cast<std::size_t>(n), Bits(static_cast<std::size_t>(h_.n())));
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < h_.n(); ++w)
        if (h_.degree(w) >= g_.degree(v)) domain[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(w));
    image_.assign(static_cast<std::size_t>(n), -1);
    if (recurse(0, domain)) return VertexMap{image_};
    return std::nullopt;
  }

 private:
  bool recurse(int v, const std::vector<Bits>& domain) {
    const int n = g_.n();
    if (v == n) return true;
    counter_.tick("embedding search");
    const Bits& dv = domain[static_cast<std::size_t>(v)];
    for (auto w = dv.find_first(); w != Bits::npos; w = dv.find_next(w)) {
      std::vector<Bits> next(domain.begin(), domain.end());
      bool ok = true;
      for (int u = v + 1; u < n && ok; ++u) {
        Bits& du = next[static_cast<std::size_t>(u)];
        du.reset(w);
        if (g_.has_edge(v, u))
          du &= h_.row(static_cast<int>(w));
        else
          du -= h_.row(static_cast<int>(w));
        int k = dist_g_[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
        if (k >= 0) {
          if (static_cast<std::size_t>(k) < within_.size())
            du &= within_[static_cast<std::size_t>(k)][w];
        }
        ok = du.any();
      }
      if (!ok) continue;
      image_[static_cast<std::size_t>(v)] = static_cast<int>(w);
      if (recurse(v + 1, next)) return true;
    }
    image_[static_cast<std::size_t>(v)] = -1;
    return false;
  }

  const Graph& g_;
  const Graph& h_;
  NodeCounter counter_;
  std::vector<std::vector<int>> dist_g_;
  std::vector<std::vector<Bits>> within_;
  std::vector<int> image_;
};

}  // namespace detail

// Lexicographically least induced embedding g -> h (vertices of g assigned in
// index order, candidates tried in increasing order), or none.
inline std::optional<VertexMap> find_embedding(const Graph& g, const Graph& h, const Budget& budget = default_budget()) {
  budget.check_vertices(static_cast<std::size_t>(g.n()), "embedding domain");
  budget.check_vertices(static_cast<std::size_t>(h.n()), "embedding codomain");
  if (g.n() > h.n()) return std::nullopt;
  if (g.n() == 0) return VertexMap{};
  return detail::EmbeddingSearch(g, h, budget).run();
}

inline std::optional<VertexMap> find_isomorphism(const Graph& g, const Graph& h, const Budget& budget = default_budget()) {
  budget.check_vertices(static_cast<std::size_t>(std::max(g.n(), h.n())), "isomorphism test");
  if (g.n() != h.n() || g.edge_count() != h.edge_count()) return std::nullopt;
  auto m = find_structure_isomorphism(ColoredStructure::from_graph(g), ColoredStructure::from_graph(h), {}, budget);
  if (!m) return std::nullopt;
  return VertexMap{*m};
}

inline bool is_isomorphism(const Graph& g, const Graph& h, const VertexMap& m) {
  return g.n() == h.n() && is_embedding(g, h, m);
}

inline AutomorphismGroup automorphisms(const Graph& g, const Budget& budget = default_budget()) {
  budget.check_vertices(static_cast<std::size_t>(g.n()), "automorphism group");
  return automorphism_group(ColoredStructure::from_graph(g), budget);
}

// gamma: vertices(hprime) -> vertices(h), onto, every edge to an edge.
inline bool is_epimorphism(const Graph& h, const Graph& hprime, const VertexMap& gamma) {
  if (gamma.image.size() != static_cast<std::size_t>(hprime.n())) throw MalformedInput("map", "length differs from domain size");
  std::vector<char> hit(static_cast<std::size_t>(h.n()), 0);
  for (int w : gamma.image) {
    if (w < 0 || w >= h.n()) throw MalformedInput("map", "image vertex " + std::to_string(w) + " out of range");
    hit[static_cast<std::size_t>(w)] = 1;
  }
  if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return false;
  for (auto [i, j] : hprime.edges())
    if (!h.has_edge(gamma.image[static_cast<std::size_t>(i)], gamma.image[static_cast<std::size_t>(j)])) return false;
  return true;
}

namespace detail {

class EpimorphismSearch {
 public:
  EpimorphismSearch(const Graph& h, const Graph& hp, const Budget& budget) : h_(h), hp_(hp), counter_(budget) {}

  std::optional<VertexMap> run() {
    std::vector<Bits> domain(static_cast<std::size_t>(hp_.n()), Bits(static_cast<std::size_t>(h_.n())));
    for (int v = 0; v < hp_.n(); ++v)
      for (int w = 0; w < h_.n(); ++w)
        // A non-isolated vertex cannot land on an isolated one.
        if (hp_.degree(v) == 0 || h_.degree(w) > 0) domain[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(w));
    image_.assign(static_cast<std::size_t>(hp_.n()), -1);
    cover_.assign(static_cast<std::size_t>(h_.n()), 0);
    uncovered_ = h_.n();
    if (recurse(0, domain)) return VertexMap{image_};
    return std::nullopt;
  }

 private:
  bool recurse(int v, const std::vector<Bits>& domain) {
    const int n = hp_.n();
    if (uncovered_ > n - v) return false;
    if (v == n) return uncovered_ == 0;
    counter_.tick("epimorphism search");
    const Bits& dv = domain[static_cast<std::size_t>(v)];
    for (auto w = dv.find_first(); w != Bits::npos; w = dv.find_next(w)) {
      std::vector<Bits> next(domain.begin(), domain.end());
      bool ok = true;
      for (int u : hp_.neighbors(v))
        if (u > v) {
          next[static_cast<std::size_t>(u)] &= h_.row(static_cast<int>(w));
          if (next[static_cast<std::size_t>(u)].none()) {
            ok = false;
            break;
          }
        }
      if (!ok) continue;
      image_[static_cast<std::size_t>(v)] = static_cast<int>(w);
      if (cover_[w]++ == 0) --uncovered_;
      if (recurse(v + 1, next)) return true;
      if (--cover_[w] == 0) ++uncovered_;
    }
    image_[static_cast<std::size_t>(v)] = -1;
    return false;
  }

  const Graph& h_;
  const Graph& hp_;
  NodeCounter counter_;
  std::vector<int> image_;
  std::vector<int> cover_;
  int uncovered_ = 0;
};

}  // namespace detail

// Vertex-surjective, edge-preserving gamma: hprime -> h (so h is an
// epimorphic image of hprime), lexicographically least, or none.
inline std::optional<VertexMap> find_epimorphism(const Graph& h, const Graph& hprime, const Budget& budget = default_budget()) {
  budget.check_vertices(static_cast<std::size_t>(std::max(h.n(), hprime.n())), "epimorphism search");
  if (h.n() > hprime.n()) return std::nullopt;
  if (hprime.n() == 0) return VertexMap{};
  if (h.n() == 0) return std::nullopt;
  return detail::EpimorphismSearch(h, hprime, budget).run();
}

}  // namespace forge
