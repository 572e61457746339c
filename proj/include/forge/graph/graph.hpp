#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "forge/core/error.hpp"

namespace forge {

using Bits = boost::dynamic_bitset<unsigned long long>;

// Finite simple graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n), Bits(static_cast<std::size_t>(n))) {
    if (n < 0) throw PreconditionError("negative vertex count");
  }

  Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
    for (auto [i, j] : edges) add_edge(i, j);
  }

  int n() const noexcept { return static_cast<int>(adj_.size()); }

  void add_edge(int i, int j) {
    check_vertex(i);
    check_vertex(j);
    if (i == j) throw PreconditionError("self-loop {" + std::to_string(i) + "," + std::to_string(i) + "}");
    adj_[i].set(j);
    adj_[j].set(i);
  }

  bool has_edge(int i, int j) const { return adj_[i].test(static_cast<std::size_t>(j)); }

  int degree(int i) const { return static_cast<int>(adj_[i].count()); }

  const Bits& row(int i) const { return adj_[i]; }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (auto j = adj_[i].find_first(); j != Bits::npos; j = adj_[i].find_next(j)) out.push_back(static_cast<int>(j));
    return out;
  }

  // Canonical edge list: pairs (i,j) with i<j, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n(); ++i)
      for (auto j = adj_[i].find_next(static_cast<std::size_t>(i)); j != Bits::npos; j = adj_[i].find_next(j))
        out.emplace_back(i, static_cast<int>(j));
    return out;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& r : adj_) m += r.count();
    return m / 2;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }
  friend bool operator!=(const Graph& a, const Graph& b) { return !(a == b); }

 private:
  void check_vertex(int i) const {
    if (i < 0 || i >= n()) throw PreconditionError("vertex " + std::to_string(i) + " out of range");
  }

  std::vector<Bits> adj_;
};

// Witness map between two graphs: image[v] is the codomain vertex of v.
struct VertexMap {
  std::vector<int> image;

  friend bool operator==(const VertexMap&, const VertexMap&) = default;
};

inline VertexMap identity_map(int n) {
  VertexMap m;
  m.image.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m.image[static_cast<std::size_t>(i)] = i;
  return m;
}

// (g o f)(v) = g(f(v))
inline VertexMap compose(const VertexMap& f, const VertexMap& g) {
  VertexMap out;
  out.image.reserve(f.image.size());
  for (int v : f.image) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.image.size()) throw MalformedInput("map", "composition out of range");
    out.image.push_back(g.image[static_cast<std::size_t>(v)]);
  }
  return out;
}

// Connected and acyclic.
inline bool is_combinatorial_tree(const Graph& g) {
  if (g.n() == 0) return false;
  if (g.edge_count() != static_cast<std::size_t>(g.n() - 1)) return false;
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v))
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == g.n();
}

// All-pairs shortest path lengths; -1 for unreachable pairs.
inline std::vector<std::vector<int>> distance_matrix(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int s = 0; s < n; ++s) {
    auto& row = dist[static_cast<std::size_t>(s)];
    row[static_cast<std::size_t>(s)] = 0;
    std::vector<int> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int w : g.neighbors(v))
        if (row[static_cast<std::size_t>(w)] < 0) {
          row[static_cast<std::size_t>(w)] = row[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
    }
  }
  return dist;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  if (n >= 3) g.add_edge(0, n - 1);
  return g;
}

// Star K_{1,leaves} with center 0.
inline Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph g(a.n() + b.n());
  for (auto [i, j] : a.edges()) g.add_edge(i, j);
  for (auto [i, j] : b.edges()) g.add_edge(a.n() + i, a.n() + j);
  return g;
}

}  // namespace forge
