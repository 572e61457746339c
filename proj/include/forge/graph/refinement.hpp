#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "forge/core/budget.hpp"
#include "forge/graph/graph.hpp"

namespace forge {

// A finite structure with colored vertices and colored ordered pairs. Pair
// color 0 is the implicit background; only non-background entries are
// stored. Graphs, metric spaces, and binary relational structures all reduce
// to this form so one individualization-refinement engine serves them all.
class ColoredStructure {
 public:
  explicit ColoredStructure(int n = 0)
      : vertex_color_(static_cast<std::size_t>(n), 0), out_(static_cast<std::size_t>(n)), in_(static_cast<std::size_t>(n)) {}

  static ColoredStructure from_graph(const Graph& g) {
    ColoredStructure s(g.n());
    for (auto [i, j] : g.edges()) {
      s.set_pair(i, j, 1);
      s.set_pair(j, i, 1);
    }
    s.finalize();
    return s;
  }

  int n() const noexcept { return static_cast<int>(vertex_color_.size()); }

  void set_vertex_color(int v, int c) { vertex_color_[static_cast<std::size_t>(v)] = c; }
  int vertex_color(int v) const { return vertex_color_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& vertex_colors() const noexcept { return vertex_color_; }

  // Call finalize() after the last set_pair.
  void set_pair(int v, int u, int color) {
    if (color == 0 || v == u) return;
    out_[static_cast<std::size_t>(v)].emplace_back(u, color);
    in_[static_cast<std::size_t>(u)].emplace_back(v, color);
  }

  void finalize() {
    for (auto& l : out_) std::sort(l.begin(), l.end());
    for (auto& l : in_) std::sort(l.begin(), l.end());
  }

  int pair_color(int v, int u) const {
    const auto& l = out_[static_cast<std::size_t>(v)];
    auto it = std::lower_bound(l.begin(), l.end(), std::make_pair(u, 0));
    return (it != l.end() && it->first == u) ? it->second : 0;
  }

  const std::vector<std::pair<int, int>>& out(int v) const { return out_[static_cast<std::size_t>(v)]; }
  const std::vector<std::pair<int, int>>& in(int v) const { return in_[static_cast<std::size_t>(v)]; }

 private:
  std::vector<int> vertex_color_;
  std::vector<std::vector<std::pair<int, int>>> out_;
  std::vector<std::vector<std::pair<int, int>>> in_;
};

namespace detail {

using Signature = std::vector<std::uint64_t>;

inline Signature signature_of(const ColoredStructure& s, const std::vector<int>& color, int v) {
  Signature sig;
  sig.reserve(1 + s.out(v).size() + s.in(v).size());
  for (auto [u, c] : s.out(v))
    sig.push_back((std::uint64_t{0} << 63) | (static_cast<std::uint64_t>(c) << 32) | static_cast<std::uint32_t>(color[static_cast<std::size_t>(u)]));
  for (auto [u, c] : s.in(v))
    sig.push_back((std::uint64_t{1} << 63) | (static_cast<std::uint64_t>(c) << 32) | static_cast<std::uint32_t>(color[static_cast<std::size_t>(u)]));
  std::sort(sig.begin(), sig.end());
  sig.insert(sig.begin(), static_cast<std::uint64_t>(color[static_cast<std::size_t>(v)]));
  return sig;
}

inline int count_colors(const std::vector<int>& color) {
  std::vector<int> c = color;
  std::sort(c.begin(), c.end());
  return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
}

}  // namespace detail

// Refines two colorings in lockstep until both are equitable, naming colors
// canonically from signatures so equal names mean equal roles. Returns false
// as soon as the color histograms of the two sides diverge (no isomorphism
// respecting the input colorings can exist).
inline bool refine_jointly(const ColoredStructure& a, const ColoredStructure& b, std::vector<int>& ca, std::vector<int>& cb) {
  const int n = a.n();
  if (b.n() != n) return false;
  int classes = detail::count_colors(ca);
  for (;;) {
    std::vector<detail::Signature> sa(static_cast<std::size_t>(n)), sb(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      sa[static_cast<std::size_t>(v)] = detail::signature_of(a, ca, v);
      sb[static_cast<std::size_t>(v)] = detail::signature_of(b, cb, v);
    }
    std::vector<const detail::Signature*> all;
    all.reserve(2 * static_cast<std::size_t>(n));
    for (const auto& s : sa) all.push_back(&s);
    for (const auto& s : sb) all.push_back(&s);
    std::sort(all.begin(), all.end(), [](auto* x, auto* y) { return *x < *y; });
    all.erase(std::unique(all.begin(), all.end(), [](auto* x, auto* y) { return *x == *y; }), all.end());
    auto name = [&](const detail::Signature& s) {
      auto it = std::lower_bound(all.begin(), all.end(), &s, [](auto* x, auto* y) { return *x < *y; });
      return static_cast<int>(it - all.begin());
    };
    std::vector<int> hist(all.size(), 0);
    for (int v = 0; v < n; ++v) {
      ca[static_cast<std::size_t>(v)] = name(sa[static_cast<std::size_t>(v)]);
      ++hist[static_cast<std::size_t>(ca[static_cast<std::size_t>(v)])];
    }
    for (int v = 0; v < n; ++v) {
      cb[static_cast<std::size_t>(v)] = name(sb[static_cast<std::size_t>(v)]);
      if (--hist[static_cast<std::size_t>(cb[static_cast<std::size_t>(v)])] < 0) return false;
    }
    int now = detail::count_colors(ca);
    if (now == classes) return true;
    classes = now;
  }
}

// Checks that `map` (a -> b) is a color-preserving isomorphism.
inline bool is_structure_isomorphism(const ColoredStructure& a, const ColoredStructure& b, const std::vector<int>& map) {
  const int n = a.n();
  if (b.n() != n || static_cast<int>(map.size()) != n) return false;
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    int w = map[static_cast<std::size_t>(v)];
    if (w < 0 || w >= n || hit[static_cast<std::size_t>(w)]) return false;
    hit[static_cast<std::size_t>(w)] = 1;
    if (a.vertex_color(v) != b.vertex_color(w)) return false;
    if (a.out(v).size() != b.out(w).size()) return false;
    for (auto [u, c] : a.out(v))
      if (b.pair_color(w, map[static_cast<std::size_t>(u)]) != c) return false;
  }
  return true;
}

namespace detail {

inline std::optional<std::vector<int>> iso_search(const ColoredStructure& a, const ColoredStructure& b, std::vector<int> ca,
                                                  std::vector<int> cb, NodeCounter& counter) {
  counter.tick("isomorphism search");
  if (!refine_jointly(a, b, ca, cb)) return std::nullopt;
  const int n = a.n();
  // Smallest non-singleton cell, ties broken by color name.
  std::vector<int> size(static_cast<std::size_t>(2 * n + 2), 0);
  for (int c : ca) ++size[static_cast<std::size_t>(c)];
  int cell = -1;
  for (int c = 0; c < static_cast<int>(size.size()); ++c)
    if (size[static_cast<std::size_t>(c)] > 1 && (cell < 0 || size[static_cast<std::size_t>(c)] < size[static_cast<std::size_t>(cell)])) cell = c;
  if (cell < 0) {
    std::vector<int> by_color(size.size(), -1);
    for (int w = 0; w < n; ++w) by_color[static_cast<std::size_t>(cb[static_cast<std::size_t>(w)])] = w;
    std::vector<int> map(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) map[static_cast<std::size_t>(v)] = by_color[static_cast<std::size_t>(ca[static_cast<std::size_t>(v)])];
    if (is_structure_isomorphism(a, b, map)) return map;
    return std::nullopt;
  }
  int x = -1;
  for (int v = 0; v < n && x < 0; ++v)
    if (ca[static_cast<std::size_t>(v)] == cell) x = v;
  const int fresh = static_cast<int>(size.size());
  for (int y = 0; y < n; ++y) {
    if (cb[static_cast<std::size_t>(y)] != cell) continue;
    auto na = ca, nb = cb;
    na[static_cast<std::size_t>(x)] = fresh;
    nb[static_cast<std::size_t>(y)] = fresh;
    if (auto found = iso_search(a, b, std::move(na), std::move(nb), counter)) return found;
  }
  return std::nullopt;
}

}  // namespace detail

// Finds a color-preserving isomorphism a -> b, optionally constrained so that
// pinned[k].first maps to pinned[k].second. Exhaustive: refinement only
// prunes branches that cannot contain an isomorphism.
inline std::optional<std::vector<int>> find_structure_isomorphism(const ColoredStructure& a, const ColoredStructure& b,
                                                                  const std::vector<std::pair<int, int>>& pinned = {},
                                                                  const Budget& budget = default_budget()) {
  if (a.n() != b.n()) return std::nullopt;
  std::vector<int> ca = a.vertex_colors(), cb = b.vertex_colors();
  // Shift input colors above the pin labels.
  int top = 0;
  for (int c : ca) top = std::max(top, c);
  for (int c : cb) top = std::max(top, c);
  for (std::size_t k = 0; k < pinned.size(); ++k) {
    auto [v, w] = pinned[k];
    if (v < 0 || v >= a.n() || w < 0 || w >= b.n()) return std::nullopt;
    int label = top + 1 + static_cast<int>(k);
    if (ca[static_cast<std::size_t>(v)] > top || cb[static_cast<std::size_t>(w)] > top) {
      // v or w already pinned: consistent only if pinned together.
      if (ca[static_cast<std::size_t>(v)] != cb[static_cast<std::size_t>(w)]) return std::nullopt;
      continue;
    }
    if (a.vertex_color(v) != b.vertex_color(w)) return std::nullopt;
    ca[static_cast<std::size_t>(v)] = label;
    cb[static_cast<std::size_t>(w)] = label;
  }
  NodeCounter counter(budget);
  return detail::iso_search(a, b, std::move(ca), std::move(cb), counter);
}

// Automorphism group as a generating set plus exact order.
struct AutomorphismGroup {
  std::vector<std::vector<int>> generators;
  // Exact order; saturates at UINT64_MAX for astronomically large groups.
  std::uint64_t order = 1;
  // Base points chosen by the search and the orbit length at each level.
  std::vector<int> base;
  std::vector<std::uint64_t> orbit_lengths;
};

// Computes Aut(s) via a chain of point stabilizers: at each level the orbit
// of a base point under the stabilizer of earlier base points is found by
// testing every candidate in its refined cell, and |Aut| is the product of
// orbit lengths. The found automorphisms (coset representatives of every
// level) generate the group.
inline AutomorphismGroup automorphism_group(const ColoredStructure& s, const Budget& budget = default_budget()) {
  AutomorphismGroup group;
  const int n = s.n();
  std::vector<std::pair<int, int>> pins;
  std::vector<int> colors = s.vertex_colors();
  for (;;) {
    auto ca = colors, cb = colors;
    for (std::size_t k = 0; k < pins.size(); ++k) {
      // Pins carry labels above every refined color name.
      ca[static_cast<std::size_t>(pins[k].first)] = cb[static_cast<std::size_t>(pins[k].first)] = 4 * n + 4 + static_cast<int>(k);
    }
    refine_jointly(s, s, ca, cb);
    std::vector<int> size(static_cast<std::size_t>(2 * n + 2), 0);
    for (int c : ca) ++size[static_cast<std::size_t>(c)];
    int cell = -1;
    for (int c = 0; c < static_cast<int>(size.size()); ++c)
      if (size[static_cast<std::size_t>(c)] > 1) {
        cell = c;
        break;
      }
    if (cell < 0) break;
    int x = -1;
    for (int v = 0; v < n && x < 0; ++v)
      if (ca[static_cast<std::size_t>(v)] == cell) x = v;
    std::vector<char> in_orbit(static_cast<std::size_t>(n), 0);
    in_orbit[static_cast<std::size_t>(x)] = 1;
    std::vector<std::vector<int>> level_gens;
    std::uint64_t orbit_len = 1;
    for (int y = 0; y < n; ++y) {
      if (ca[static_cast<std::size_t>(y)] != cell || in_orbit[static_cast<std::size_t>(y)]) continue;
      auto test_pins = pins;
      test_pins.emplace_back(x, y);
      std::vector<std::pair<int, int>> constraint;
      for (auto [p, q] : pins) constraint.emplace_back(p, p);
      constraint.emplace_back(x, y);
      auto aut = find_structure_isomorphism(s, s, constraint, budget);
      if (!aut) continue;
      level_gens.push_back(*aut);
      // Close the orbit under generators found at this level.
      std::vector<int> frontier;
      for (int v = 0; v < n; ++v)
        if (in_orbit[static_cast<std::size_t>(v)]) frontier.push_back(v);
      while (!frontier.empty()) {
        int v = frontier.back();
        frontier.pop_back();
        for (const auto& g : level_gens) {
          int w = g[static_cast<std::size_t>(v)];
          if (!in_orbit[static_cast<std::size_t>(w)]) {
            in_orbit[static_cast<std::size_t>(w)] = 1;
            ++orbit_len;
            frontier.push_back(w);
          }
        }
      }
    }
    group.base.push_back(x);
    group.orbit_lengths.push_back(orbit_len);
    if (group.order > UINT64_MAX / orbit_len)
      group.order = UINT64_MAX;
    else
      group.order *= orbit_len;
    for (auto& g : level_gens) group.generators.push_back(std::move(g));
    pins.emplace_back(x, x);
  }
  return group;
}

}  // namespace forge
