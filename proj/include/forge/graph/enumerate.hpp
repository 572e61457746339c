#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "forge/core/error.hpp"
#include "forge/graph/graph.hpp"

namespace forge {

// Graphs on at most 8 vertices are coded by an edge mask over pairs (i,j),
// i<j, in lexicographic order.
inline constexpr int kSmallGraphMax = 8;

inline int pair_slot(int n, int i, int j) {
  // Slots before row i, then offset inside row i.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline Graph graph_from_mask(int n, std::uint32_t mask) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (mask >> pair_slot(n, i, j) & 1u) g.add_edge(i, j);
  return g;
}

inline std::uint32_t graph_mask(const Graph& g) {
  if (g.n() > kSmallGraphMax) throw PreconditionError("edge mask needs at most 8 vertices");
  std::uint32_t mask = 0;
  for (auto [i, j] : g.edges()) mask |= 1u << pair_slot(g.n(), i, j);
  return mask;
}

// Least edge mask over all relabelings; two small graphs are isomorphic iff
// their canonical masks agree.
inline std::uint32_t canonical_mask(const Graph& g) {
  const int n = g.n();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = UINT32_MAX;
  auto edges = g.edges();
  do {
    std::uint32_t mask = 0;
    for (auto [i, j] : edges) {
      int a = perm[static_cast<std::size_t>(i)], b = perm[static_cast<std::size_t>(j)];
      if (a > b) std::swap(a, b);
      mask |= 1u << pair_slot(n, a, b);
    }
    best = std::min(best, mask);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// All labeled graphs on exactly n vertices, in increasing mask order.
inline std::vector<Graph> labeled_graphs(int n) {
  if (n < 0 || n > 7) throw PreconditionError("labeled graph enumeration supports n <= 7");
  const int slots = n * (n - 1) / 2;
  std::vector<Graph> out;
  out.reserve(std::size_t{1} << slots);
  for (std::uint32_t m = 0; m < (1u << slots); ++m) out.push_back(graph_from_mask(n, m));
  return out;
}

// One representative per isomorphism class on exactly n vertices: the graph
// whose mask is the canonical mask, ordered by that mask.
inline std::vector<Graph> graphs_up_to_iso(int n) {
  if (n < 0 || n > 7) throw PreconditionError("graph enumeration supports n <= 7");
  const int slots = n * (n - 1) / 2;
  std::set<std::uint32_t> seen;
  for (std::uint32_t m = 0; m < (1u << slots); ++m) seen.insert(canonical_mask(graph_from_mask(n, m)));
  std::vector<Graph> out;
  for (auto m : seen) out.push_back(graph_from_mask(n, m));
  return out;
}

// Isomorphism classes for 1 <= n <= max_n, by vertex count then mask.
inline std::vector<Graph> graphs_up_to_iso_upto(int max_n) {
  std::vector<Graph> out;
  for (int n = 1; n <= max_n; ++n) {
    auto level = graphs_up_to_iso(n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// Asymmetric test by brute force over all permutations (small n only).
inline bool is_rigid_small(const Graph& g) {
  const int n = g.n();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    bool aut = true;
    for (int i = 0; i < n && aut; ++i)
      for (int j = i + 1; j < n && aut; ++j)
        aut = g.has_edge(i, j) == g.has_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    if (aut) return false;
  }
  return true;
}

// Combinatorial trees on 1 <= n <= max_n (max_n <= 8) up to isomorphism:
// every tree on n vertices is a tree on n-1 vertices plus a leaf.
inline std::vector<Graph> trees_up_to_iso_upto(int max_n) {
  if (max_n > kSmallGraphMax) throw PreconditionError("tree enumeration supports n <= 8");
  std::vector<Graph> out;
  std::vector<Graph> level;
  if (max_n >= 1) level.push_back(Graph(1));
  for (int n = 1; n <= max_n; ++n) {
    out.insert(out.end(), level.begin(), level.end());
    if (n == max_n) break;
    std::set<std::uint32_t> seen;
    for (const auto& t : level)
      for (int v = 0; v < n; ++v) {
        Graph bigger(n + 1, t.edges());
        bigger.add_edge(v, n);
        seen.insert(canonical_mask(bigger));
      }
    level.clear();
    for (auto m : seen) level.push_back(graph_from_mask(n + 1, m));
  }
  return out;
}

}  // namespace forge
