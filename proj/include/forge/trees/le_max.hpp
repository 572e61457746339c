#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "forge/core/error.hpp"
#include "forge/core/sequences.hpp"
#include "forge/trees/normal_tree.hpp"

namespace forge {

// A Lipschitz map on a finite prefix-closed set of sequences: equal lengths,
// prefixes to prefixes.
using LipschitzMap = std::map<Seq, Seq>;

// Checks that f witnesses S <=max T: f is defined on the s-projection of S,
// length- and prefix-preserving, lands below T's bound, and sends every
// (u, s) in S to (u, f(s)) in T.
inline bool is_valid_witness(const FiniteNormalTree& s, const FiniteNormalTree& t, const LipschitzMap& f) {
  if (s.depth() != t.depth()) return false;
  for (const auto& [x, y] : f) {
    if (x.size() != y.size()) return false;
    for (int v : y)
      if (v < 0 || v >= t.bound()) return false;
    if (!x.empty()) {
      auto parent = f.find(prefix(x, x.size() - 1));
      if (parent != f.end() && !is_prefix(parent->second, y)) return false;
    }
  }
  for (const auto& n : s.nodes()) {
    auto it = f.find(n.s);
    if (it == f.end()) return false;
    if (!t.contains(n.u, it->second)) return false;
  }
  return true;
}

// (g o f)(s) = g(f(s)) on the domain of f.
inline LipschitzMap compose(const LipschitzMap& f, const LipschitzMap& g) {
  LipschitzMap out;
  for (const auto& [x, y] : f) {
    auto it = g.find(y);
    if (it == g.end()) throw PreconditionError("composition: f(s) outside the domain of g");
    out.emplace(x, it->second);
  }
  return out;
}

// Per-tree data for the <=max search: for each s (indexed by length-lex
// rank over the tree's bound) the mask of bit strings u with (u, s) in T.
class TreeProfile {
 public:
  explicit TreeProfile(const FiniteNormalTree& t) : d_(t.depth()), b_(t.bound()) {
    if (d_ > 6) throw PreconditionError("<=max search supports depth <= 6");
    auto seqs = sequences_up_to(static_cast<std::size_t>(d_), b_);
    masks_.reserve(seqs.size());
    for (const auto& s : seqs) masks_.push_back(t.u_mask(s));
    for (int k = 0; k <= d_ + 1; ++k) level_start_.push_back(count_shorter(static_cast<std::uint64_t>(b_), static_cast<std::size_t>(k)));
  }

  int depth() const noexcept { return d_; }
  int bound() const noexcept { return b_; }
  std::size_t size() const noexcept { return masks_.size(); }
  std::uint64_t mask(std::size_t rank) const { return masks_[rank]; }
  std::size_t level_start(int k) const { return static_cast<std::size_t>(level_start_[static_cast<std::size_t>(k)]); }
  // Rank of s^i given the rank of s at length k.
  std::size_t child(std::size_t rank, int k, int i) const {
    return level_start(k + 1) + (rank - level_start(k)) * static_cast<std::size_t>(b_) + static_cast<std::size_t>(i);
  }

 private:
  int d_;
  int b_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint64_t> level_start_;
};

namespace detail {

// Decides S <=max T. Because the requirement on f(s) only involves f's value
// at s, and children only need to extend f(s), the search decouples:
// feasible(s, t) = U_S(s) within U_T(t) and each child of s in the
// projection has some feasible extension of t. Returns f as rank -> rank
// (-1 off the projection), choosing the least feasible extension at each
// node, which makes f the lexicographically least witness.
inline std::optional<std::vector<std::int64_t>> le_max_ranks(const TreeProfile& s, const TreeProfile& t) {
  const int d = s.depth();
  const int bt = t.bound();
  // memo[rs * |T| + rt]: 0 unknown, 1 feasible, 2 infeasible.
  std::vector<std::uint8_t> memo(s.size() * t.size(), 0);
  auto feasible = [&](auto&& self, std::size_t rs, std::size_t rt, int k) -> bool {
    std::uint8_t& m = memo[rs * t.size() + rt];
    if (m) return m == 1;
    bool ok = (s.mask(rs) & ~t.mask(rt)) == 0;
    if (ok && k < d) {
      for (int i = 0; i < s.bound() && ok; ++i) {
        std::size_t cs = s.child(rs, k, i);
        if (s.mask(cs) == 0) continue;  // off the projection
        bool any = false;
        for (int j = 0; j < bt && !any; ++j) any = self(self, cs, t.child(rt, k, j), k + 1);
        ok = any;
      }
    }
    m = ok ? 1 : 2;
    return ok;
  };
  if (!feasible(feasible, 0, 0, 0)) return std::nullopt;
  std::vector<std::int64_t> f(s.size(), -1);
  f[0] = 0;
  for (int k = 0; k < d; ++k)
    for (std::size_t rs = s.level_start(k); rs < s.level_start(k + 1); ++rs) {
      if (f[rs] < 0) continue;
      for (int i = 0; i < s.bound(); ++i) {
        std::size_t cs = s.child(rs, k, i);
        if (s.mask(cs) == 0) continue;
        for (int j = 0; j < bt; ++j) {
          std::size_t ct = t.child(static_cast<std::size_t>(f[rs]), k, j);
          if (feasible(feasible, cs, ct, k + 1)) {
            f[cs] = static_cast<std::int64_t>(ct);
            break;
          }
        }
      }
    }
  return f;
}

}  // namespace detail

inline bool le_max_holds(const TreeProfile& s, const TreeProfile& t) {
  if (s.depth() != t.depth()) throw PreconditionError("<=max compares trees of equal depth");
  return detail::le_max_ranks(s, t).has_value();
}

// The lexicographically least witness of S <=max T, or none.
inline std::optional<LipschitzMap> le_max(const FiniteNormalTree& s, const FiniteNormalTree& t) {
  if (s.depth() != t.depth()) throw PreconditionError("<=max compares trees of equal depth");
  TreeProfile ps(s), pt(t);
  auto ranks = detail::le_max_ranks(ps, pt);
  if (!ranks) return std::nullopt;
  LipschitzMap f;
  for (std::size_t r = 0; r < ranks->size(); ++r)
    if ((*ranks)[r] >= 0)
      f.emplace(unrank_length_lex(r, static_cast<std::uint64_t>(s.bound())),
                unrank_length_lex(static_cast<std::uint64_t>((*ranks)[r]), static_cast<std::uint64_t>(t.bound())));
  return f;
}

struct InjectiveWitness {
  int bound = 0;                 // enlarged bound b' of the target
  FiniteNormalTree target;       // T presented with bound b'
  LipschitzMap f;                // defined on all of {0..b_S-1}^{<=d}
};

// Enlarged target bound used by canonical_injective_witness. With
// B = max(b_S, b_T), the last entries B, ..., B + b_S - 1 always include an
// unused one that dominates f0 and keeps the rank condition, so the greedy
// construction below never gets stuck.
inline int injective_bound(int bs, int bt) { return std::max(bs, bt) + bs * bs; }

// Refines a witness f0 of S <=max T to an injective one with
// rank(s) <= rank(f(s)), defining f(s) level by level as the lex-least t
// that extends f(parent), dominates f0(s), is unused at its level, and has
// rank at least rank(s). Ranks are length-lex over each tree's bound.
inline InjectiveWitness canonical_injective_witness(const FiniteNormalTree& s, const FiniteNormalTree& t, const LipschitzMap& f0) {
  if (!is_valid_witness(s, t, f0)) throw PreconditionError("f0 does not witness S <=max T");
  InjectiveWitness out;
  out.bound = injective_bound(s.bound(), t.bound());
  out.target = rebound(t, out.bound);
  const auto bs = static_cast<std::uint64_t>(s.bound());
  const auto bp = static_cast<std::uint64_t>(out.bound);
  out.f.emplace(Seq{}, Seq{});
  for (int k = 1; k <= s.depth(); ++k) {
    std::set<Seq> used;
    for (const auto& x : sequences_of_length(static_cast<std::size_t>(k), s.bound())) {
      const Seq& base = out.f.at(prefix(x, x.size() - 1));
      auto hint = f0.find(x);
      int lo = hint == f0.end() ? 0 : hint->second.back();
      const std::uint64_t need = length_lex_rank(x, bs);
      bool placed = false;
      for (int v = lo; v < out.bound && !placed; ++v) {
        Seq y = base;
        y.push_back(v);
        if (hint != f0.end() && !pointwise_leq(hint->second, y)) continue;
        if (used.count(y) || length_lex_rank(y, bp) < need) continue;
        used.insert(y);
        out.f.emplace(x, std::move(y));
        placed = true;
      }
      if (!placed) throw Error("canonical_injective_witness: no admissible extension (bound too small)");
    }
  }
  return out;
}

inline bool is_injective(const LipschitzMap& f) {
  std::set<Seq> images;
  for (const auto& [x, y] : f)
    if (!images.insert(y).second) return false;
  return true;
}

// rank(s) <= rank(f(s)) with ranks over the respective bounds.
inline bool is_rank_monotone(const LipschitzMap& f, int source_bound, int target_bound) {
  for (const auto& [x, y] : f)
    if (length_lex_rank(x, static_cast<std::uint64_t>(source_bound)) > length_lex_rank(y, static_cast<std::uint64_t>(target_bound))) return false;
  return true;
}

}  // namespace forge
