#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "forge/core/error.hpp"
#include "forge/core/sequences.hpp"
#include "forge/trees/normal_tree.hpp"

namespace forge {

struct NormalFormReport {
  bool reflexive = false;      // (u, u, s) present for all u, s in the frame
  bool transitive = false;     // (u,v,s), (v,w,t) imply (u, w, clip(s+t))
  bool antisymmetric = false;  // (u, v, 0^|u|) implies u = v

  bool all() const { return reflexive && transitive && antisymmetric; }
  friend bool operator==(const NormalFormReport&, const NormalFormReport&) = default;
};

// Checks the local quasi-order conditions of a triple tree level by level.
// At depth k the tree is a family of relations on {0,1}^k indexed by s; each
// relation is stored as one bitmask row per u, so transitivity becomes
// relation composition.
inline NormalFormReport check_normal_form(const FiniteNormalTree3& tree) {
  const int d = tree.depth();
  const int b = tree.bound();
  if (d > 6) throw PreconditionError("normal-form check supports depth <= 6");
  NormalFormReport rep{true, true, true};
  const auto& bits = tree.bits();
  std::uint64_t offset = 0;
  for (int k = 0; k <= d; ++k) {
    const std::size_t nu = std::size_t{1} << k;
    const std::size_t ns = ipow(static_cast<std::uint64_t>(b), static_cast<unsigned>(k));
    // rel[s * nu + u] = set of v with (u, v, s) in the tree.
    std::vector<std::uint64_t> rel(ns * nu, 0);
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t v = 0; v < nu; ++v)
        for (std::size_t s = 0; s < ns; ++s)
          if (bits.test(static_cast<std::size_t>(offset + (u * nu + v) * ns + s))) rel[s * nu + u] |= std::uint64_t{1} << v;
    offset += nu * nu * ns;

    for (std::size_t s = 0; s < ns && rep.reflexive; ++s)
      for (std::size_t u = 0; u < nu; ++u)
        if (!(rel[s * nu + u] >> u & 1)) {
          rep.reflexive = false;
          break;
        }
    for (std::size_t u = 0; u < nu; ++u)
      if (rel[u] & ~(std::uint64_t{1} << u)) rep.antisymmetric = false;  // s = 0^k has position 0

    if (!rep.transitive) continue;
    // Position of clip(s + t), digit by digit.
    for (std::size_t s = 0; s < ns && rep.transitive; ++s) {
      for (std::size_t t = 0; t < ns && rep.transitive; ++t) {
        std::size_t sum = 0, ps = s, pt = t, weight = 1;
        for (int i = 0; i < k; ++i) {
          std::size_t ds = ps % static_cast<std::size_t>(b), dt = pt % static_cast<std::size_t>(b);
          ps /= static_cast<std::size_t>(b);
          pt /= static_cast<std::size_t>(b);
          sum += std::min(ds + dt, static_cast<std::size_t>(b - 1)) * weight;
          weight *= static_cast<std::size_t>(b);
        }
        for (std::size_t u = 0; u < nu && rep.transitive; ++u) {
          std::uint64_t reach = 0;
          for (std::uint64_t vs = rel[s * nu + u]; vs; vs &= vs - 1) reach |= rel[t * nu + static_cast<std::size_t>(__builtin_ctzll(vs))];
          if (reach & ~rel[sum * nu + u]) rep.transitive = false;
        }
      }
    }
  }
  return rep;
}

namespace detail {

// Cells of one level of the triple frame, plus the capped-sum table.
struct DefinitionLevel {
  std::vector<Seq> us, ss;
  std::vector<std::size_t> sum;  // sum[s * ns + t] = index of min(s + t, b - 1)
};

inline const DefinitionLevel& definition_level(int k, int b) {
  thread_local std::map<std::pair<int, int>, DefinitionLevel> cache;
  auto [it, fresh] = cache.try_emplace({k, b});
  DefinitionLevel& lv = it->second;
  if (!fresh) return lv;
  lv.us = sequences_of_length(static_cast<std::size_t>(k), 2);
  lv.ss = sequences_of_length(static_cast<std::size_t>(k), b);
  const std::size_t ns = lv.ss.size();
  lv.sum.resize(ns * ns);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t t = 0; t < ns; ++t) {
      Seq c(static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::min(lv.ss[s][i] + lv.ss[t][i], b - 1);
      lv.sum[s * ns + t] = static_cast<std::size_t>(std::find(lv.ss.begin(), lv.ss.end(), c) - lv.ss.begin());
    }
  return lv;
}

}  // namespace detail

// The same three conditions read straight off the definitions: a triple
// loop over explicit (u, v, s) cells of each level. Used by the harness to
// cross-check check_normal_form on whole corpora.
inline NormalFormReport normal_form_by_definition(const FiniteNormalTree3& tree) {
  const int d = tree.depth();
  const int b = tree.bound();
  if (d > 6) throw PreconditionError("normal-form check supports depth <= 6");
  NormalFormReport rep{true, true, true};
  std::vector<char> in;
  std::vector<std::array<std::size_t, 3>> cells;
  for (int k = 0; k <= d; ++k) {
    const auto& lv = detail::definition_level(k, b);
    const std::size_t nu = lv.us.size(), ns = lv.ss.size();
    in.assign(nu * nu * ns, 0);
    cells.clear();
    FiniteNormalTree3::Coords uv;
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t v = 0; v < nu; ++v) {
        uv = {lv.us[u], lv.us[v]};
        for (std::size_t s = 0; s < ns; ++s)
          if (tree.contains(uv, lv.ss[s])) {
            in[(u * nu + v) * ns + s] = 1;
            cells.push_back({u, v, s});
          }
      }
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t s = 0; s < ns; ++s)
        if (!in[(u * nu + u) * ns + s]) rep.reflexive = false;
    for (const auto& [u, v, s] : cells) {
      if (s == 0 && u != v) rep.antisymmetric = false;
      for (const auto& [v2, w, t] : cells)
        if (v2 == v && !in[(u * nu + w) * ns + lv.sum[s * ns + t]]) rep.transitive = false;
    }
  }
  return rep;
}

}  // namespace forge
