#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "forge/core/budget.hpp"
#include "forge/core/error.hpp"
#include "forge/core/sequences.hpp"

namespace forge {

// A finite normal tree on 2^Arity x omega, truncated at depth d and with
// numeric entries below b. Arity 1 gives trees of pairs (u, s), arity 2
// trees of triples (u, v, s). Membership is one bit per node; a node's index
// packs the bit strings (each read as a binary numeral) followed by the
// base-b position of s.
template <int Arity>
class NormalTree {
  static_assert(Arity == 1 || Arity == 2);

 public:
  using Bits = boost::dynamic_bitset<unsigned long long>;
  using Coords = std::array<Seq, Arity>;

  struct Node {
    Coords u;
    Seq s;
    friend bool operator==(const Node&, const Node&) = default;
  };

  NormalTree() : NormalTree(0, 1) {}

  // An empty node set with the given parameters; see root_only() for the
  // smallest valid tree.
  NormalTree(int d, int b) : d_(d), b_(b) {
    if (d < 0 || b < 1) throw PreconditionError("tree parameters need d >= 0 and b >= 1");
    for (int k = 0; k <= d; ++k) {
      level_size_.push_back(ipow(2, static_cast<unsigned>(Arity * k)) * ipow(static_cast<std::uint64_t>(b), static_cast<unsigned>(k)));
    }
    std::uint64_t total = 0;
    for (auto sz : level_size_) {
      offset_.push_back(total);
      total += sz;
    }
    if (total > (std::uint64_t{1} << 26)) throw BudgetExceeded("normal tree node space", static_cast<std::size_t>(total));
    bits_.resize(static_cast<std::size_t>(total));
  }

  static NormalTree root_only(int d, int b) {
    NormalTree t(d, b);
    t.insert(Coords{}, Seq{});
    return t;
  }

  int depth() const noexcept { return d_; }
  int bound() const noexcept { return b_; }

  bool contains(const Coords& u, const Seq& s) const {
    auto idx = index_of(u, s);
    return idx && bits_.test(*idx);
  }
  bool contains(const Seq& u, const Seq& s) const
    requires(Arity == 1)
  {
    return contains(Coords{u}, s);
  }
  bool contains(const Seq& u, const Seq& v, const Seq& s) const
    requires(Arity == 2)
  {
    return contains(Coords{u, v}, s);
  }

  // Raw insertion; the result may violate the tree invariants until the
  // caller finishes (see validate()).
  void insert(const Coords& u, const Seq& s) {
    auto idx = index_of(u, s);
    if (!idx) throw PreconditionError("node outside the (d, b) frame");
    bits_.set(*idx);
  }
  void insert(const Seq& u, const Seq& s)
    requires(Arity == 1)
  {
    insert(Coords{u}, s);
  }
  void insert(const Seq& u, const Seq& v, const Seq& s)
    requires(Arity == 2)
  {
    insert(Coords{u, v}, s);
  }

  void erase(const Coords& u, const Seq& s) {
    auto idx = index_of(u, s);
    if (idx) bits_.reset(*idx);
  }

  std::size_t size() const { return bits_.count(); }

  // Nodes ordered by length, then bit strings, then s (all lexicographic).
  std::vector<Node> nodes() const {
    std::vector<Node> out;
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(node_at(i));
    return out;
  }

  // Every node in the (d, b) frame, members or not, in the order of nodes().
  std::vector<Node> frame() const {
    std::vector<Node> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.push_back(node_at(i));
    return out;
  }

  // Why the tree is not a valid finite normal tree, or nullopt if it is.
  std::optional<std::string> validate() const {
    if (!contains(Coords{}, Seq{})) return "root node missing";
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
      Node n = node_at(i);
      const std::size_t k = n.s.size();
      if (k > 0) {
        Coords pu;
        for (int j = 0; j < Arity; ++j) pu[static_cast<std::size_t>(j)] = prefix(n.u[static_cast<std::size_t>(j)], k - 1);
        if (!contains(pu, prefix(n.s, k - 1))) return "not prefix-closed at " + describe(n);
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (n.s[j] + 1 >= b_) continue;
        Seq up = n.s;
        ++up[j];
        if (!contains(n.u, up)) return "not normal at " + describe(n);
      }
    }
    return std::nullopt;
  }

  bool is_valid() const { return !validate().has_value(); }

  // Projection of the tree onto its numeric coordinate.
  std::vector<Seq> s_projection() const {
    std::vector<Seq> out;
    for (const auto& n : nodes()) out.push_back(n.s);
    std::sort(out.begin(), out.end(), [](const Seq& a, const Seq& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // The bit strings u with (u, s) in the tree, as a mask over binary
  // positions of u (Arity 1, |s| <= 6).
  std::uint64_t u_mask(const Seq& s) const
    requires(Arity == 1)
  {
    const std::size_t k = s.size();
    std::uint64_t mask = 0;
    const std::uint64_t span = ipow(static_cast<std::uint64_t>(b_), static_cast<unsigned>(k));
    const std::uint64_t spos = lex_position(s, static_cast<std::uint64_t>(b_));
    for (std::uint64_t u = 0; u < (std::uint64_t{1} << k); ++u)
      if (bits_.test(static_cast<std::size_t>(offset_[k] + u * span + spos))) mask |= std::uint64_t{1} << u;
    return mask;
  }

  const Bits& bits() const noexcept { return bits_; }

  friend bool operator==(const NormalTree& a, const NormalTree& b) {
    return a.d_ == b.d_ && a.b_ == b.b_ && a.bits_ == b.bits_;
  }

  static std::string describe(const Node& n) {
    std::string out = "(";
    for (int j = 0; j < Arity; ++j) out += "\"" + bits_to_string(n.u[static_cast<std::size_t>(j)]) + "\",";
    return out + "[" + seq_to_string(n.s) + "])";
  }

 private:
  std::optional<std::size_t> index_of(const Coords& u, const Seq& s) const {
    const std::size_t k = s.size();
    if (k > static_cast<std::size_t>(d_)) return std::nullopt;
    std::uint64_t tuple = 0;
    for (int j = 0; j < Arity; ++j) {
      const Seq& uj = u[static_cast<std::size_t>(j)];
      if (uj.size() != k) return std::nullopt;
      for (int x : uj) {
        if (x != 0 && x != 1) return std::nullopt;
        tuple = tuple * 2 + static_cast<std::uint64_t>(x);
      }
    }
    for (int x : s)
      if (x < 0 || x >= b_) return std::nullopt;
    std::uint64_t span = ipow(static_cast<std::uint64_t>(b_), static_cast<unsigned>(k));
    return static_cast<std::size_t>(offset_[k] + tuple * span + lex_position(s, static_cast<std::uint64_t>(b_)));
  }

  Node node_at(std::size_t index) const {
    std::size_t k = 0;
    while (k + 1 < offset_.size() && offset_[k + 1] <= index) ++k;
    std::uint64_t local = index - offset_[k];
    std::uint64_t span = ipow(static_cast<std::uint64_t>(b_), static_cast<unsigned>(k));
    std::uint64_t spos = local % span, tuple = local / span;
    Node n;
    n.s.assign(k, 0);
    for (std::size_t i = k; i-- > 0;) {
      n.s[i] = static_cast<int>(spos % static_cast<std::uint64_t>(b_));
      spos /= static_cast<std::uint64_t>(b_);
    }
    for (int j = Arity; j-- > 0;) {
      Seq& uj = n.u[static_cast<std::size_t>(j)];
      uj.assign(k, 0);
      for (std::size_t i = k; i-- > 0;) {
        uj[i] = static_cast<int>(tuple & 1);
        tuple >>= 1;
      }
    }
    return n;
  }

  int d_;
  int b_;
  std::vector<std::uint64_t> level_size_;
  std::vector<std::uint64_t> offset_;
  Bits bits_;
};

using FiniteNormalTree = NormalTree<1>;
using FiniteNormalTree3 = NormalTree<2>;

// Caps every entry of t at b-1.
inline Seq clip(const Seq& t, int b) {
  Seq out = t;
  for (int& x : out) x = std::min(x, b - 1);
  return out;
}

// The same infinite normal tree presented with a larger bound: (u, t) is a
// node iff (u, clip(t)) is a node of the original.
template <int Arity>
NormalTree<Arity> rebound(const NormalTree<Arity>& t, int new_bound) {
  if (new_bound < t.bound()) throw PreconditionError("rebound cannot shrink the bound");
  NormalTree<Arity> out(t.depth(), new_bound);
  for (const auto& n : out.frame())
    if (t.contains(n.u, clip(n.s, t.bound()))) out.insert(n.u, n.s);
  return out;
}

// S^x = {(u, s) : (u, x|u|, s) in S}.
inline FiniteNormalTree slice(const FiniteNormalTree3& s, const Seq& x) {
  if (x.size() < static_cast<std::size_t>(s.depth())) throw PreconditionError("slice needs |x| >= depth");
  for (int bit : x)
    if (bit != 0 && bit != 1) throw PreconditionError("slice point must be a bit string");
  FiniteNormalTree out(s.depth(), s.bound());
  for (const auto& n : s.nodes())
    if (n.u[1] == prefix(x, n.s.size())) out.insert(n.u[0], n.s);
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration.
//
// A tree is determined level by level: for each bit tuple at depth k the set
// of s with (tuple, s) in the tree is an upward-closed subset of the
// one-step extensions of the parent tuple's set, and siblings choose
// independently. Sets are masks over base-b positions, so b^d <= 64.

namespace detail {

struct LevelSets {
  int b = 1;
  std::map<std::pair<int, std::uint64_t>, std::vector<std::uint64_t>> memo;

  // Upward-closed subsets of the extension set of `parent` (a set at level
  // k-1), ascending by mask.
  const std::vector<std::uint64_t>& options(int k, std::uint64_t parent) {
    auto key = std::make_pair(k, parent);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<int> cells;
    const std::uint64_t span = ipow(static_cast<std::uint64_t>(b), static_cast<unsigned>(k - 1));
    for (std::uint64_t p = 0; p < span; ++p)
      if (parent >> p & 1)
        for (int x = 0; x < b; ++x) cells.push_back(static_cast<int>(p * static_cast<std::uint64_t>(b) + static_cast<std::uint64_t>(x)));
    // Process cells with larger digit sums first so every up-cover is
    // decided before the cell itself.
    auto digit_sum = [&](int pos) {
      int sum = 0;
      for (int i = 0; i < k; ++i, pos /= b) sum += pos % b;
      return sum;
    };
    std::stable_sort(cells.begin(), cells.end(), [&](int x, int y) { return digit_sum(x) > digit_sum(y); });
    std::vector<std::uint64_t> out;
    auto rec = [&](auto&& self, std::size_t i, std::uint64_t mask) -> void {
      if (i == cells.size()) {
        out.push_back(mask);
        return;
      }
      self(self, i + 1, mask);
      int pos = cells[i];
      int weight = 1;
      for (int j = 0; j < k; ++j, weight *= b) {
        int digit = pos / weight % b;
        if (digit + 1 < b && !(mask >> (pos + weight) & 1)) return;
      }
      self(self, i + 1, mask | (std::uint64_t{1} << pos));
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return memo.emplace(key, std::move(out)).first->second;
  }
};

}  // namespace detail

// Optional admissibility filter: (bit tuple, level k, set mask) -> keep?
template <int Arity>
using TupleFilter = std::function<bool(const std::array<Seq, Arity>&, int, std::uint64_t)>;

template <int Arity>
class TreeEnumerator {
 public:
  using Tree = NormalTree<Arity>;
  using Coords = typename Tree::Coords;

  TreeEnumerator(int d, int b, TupleFilter<Arity> filter = nullptr) : d_(d), b_(b), filter_(std::move(filter)) {
    if (d < 0 || b < 1) throw PreconditionError("tree parameters need d >= 0 and b >= 1");
    if (ipow(static_cast<std::uint64_t>(b), static_cast<unsigned>(d)) > 64)
      throw BudgetExceeded("tree enumeration needs b^d <= 64", static_cast<std::size_t>(ipow(static_cast<std::uint64_t>(b), static_cast<unsigned>(d))));
    sets_.b = b;
    // Bit tuples level by level; tuple i has parent parent_[i].
    tuples_.push_back(Coords{});
    parent_.push_back(-1);
    for (int k = 1; k <= d; ++k)
      for (std::size_t i = 0; i < tuples_.size(); ++i) {
        if (static_cast<int>(tuples_[i][0].size()) != k - 1) continue;
        for (int c = 0; c < (1 << Arity); ++c) {
          Coords child = tuples_[i];
          for (int j = 0; j < Arity; ++j) child[static_cast<std::size_t>(j)].push_back(c >> (Arity - 1 - j) & 1);
          tuples_.push_back(child);
          parent_.push_back(static_cast<int>(i));
        }
      }
  }

  // Exact number of trees, saturating at UINT64_MAX.
  std::uint64_t count() {
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> memo;
    // Trees below tuple i whose set is `mask`.
    auto rec = [&](auto&& self, std::size_t i, std::uint64_t mask) -> std::uint64_t {
      auto key = std::make_pair(i, mask);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      std::uint64_t total = 1;
      int k = static_cast<int>(tuples_[i][0].size());
      for (std::size_t c = i + 1; c < tuples_.size(); ++c) {
        if (parent_[c] != static_cast<int>(i)) continue;
        std::uint64_t ways = 0;
        for (auto opt : sets_.options(k + 1, mask)) {
          if (filter_ && !filter_(tuples_[c], k + 1, opt)) continue;
          ways = saturating_add(ways, self(self, c, opt));
        }
        total = saturating_mul(total, ways);
      }
      return memo[key] = total;
    };
    return rec(rec, 0, 1);
  }

  // Calls emit(tree) for every tree in canonical order: tuples are decided
  // in level order and each tuple's options ascend by mask.
  template <typename Emit>
  void for_each(Emit&& emit) {
    chosen_.assign(tuples_.size(), 0);
    chosen_[0] = 1;
    if (filter_ && !filter_(tuples_[0], 0, 1)) return;
    walk(1, emit);
  }

 private:
  static std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
  static std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > UINT64_MAX / b ? UINT64_MAX : a * b;
  }

  template <typename Emit>
  void walk(std::size_t i, Emit& emit) {
    if (i == tuples_.size()) {
      emit(build());
      return;
    }
    int k = static_cast<int>(tuples_[i][0].size());
    for (auto opt : sets_.options(k, chosen_[static_cast<std::size_t>(parent_[i])])) {
      if (filter_ && !filter_(tuples_[i], k, opt)) continue;
      chosen_[i] = opt;
      walk(i + 1, emit);
    }
  }

  Tree build() const {
    Tree t(d_, b_);
    for (std::size_t i = 0; i < tuples_.size(); ++i) {
      std::uint64_t mask = chosen_[i];
      int k = static_cast<int>(tuples_[i][0].size());
      while (mask) {
        int pos = __builtin_ctzll(mask);
        mask &= mask - 1;
        Seq s(static_cast<std::size_t>(k), 0);
        for (int j = k, p = pos; j-- > 0; p /= b_) s[static_cast<std::size_t>(j)] = p % b_;
        t.insert(tuples_[i], s);
      }
    }
    return t;
  }

  int d_;
  int b_;
  TupleFilter<Arity> filter_;
  detail::LevelSets sets_;
  std::vector<Coords> tuples_;
  std::vector<int> parent_;
  std::vector<std::uint64_t> chosen_;
};

// Number of trees enumerate_trees(d, b) would produce.
inline std::uint64_t count_trees(int d, int b) { return TreeEnumerator<1>(d, b).count(); }

// Streams every FiniteNormalTree with parameters (d, b) in canonical order.
// Refuses (with the exact count as estimate) when the corpus exceeds the
// instance budget.
template <typename Emit>
void for_each_tree(int d, int b, Emit&& emit, const Budget& budget = default_budget()) {
  TreeEnumerator<1> en(d, b);
  std::uint64_t n = en.count();
  if (n > budget.max_instances) throw BudgetExceeded("tree corpus over instance budget", static_cast<std::size_t>(n));
  en.for_each(emit);
}

inline std::vector<FiniteNormalTree> enumerate_trees(int d, int b, const Budget& budget = default_budget()) {
  std::vector<FiniteNormalTree> out;
  for_each_tree(d, b, [&](FiniteNormalTree t) { out.push_back(std::move(t)); }, budget);
  return out;
}

}  // namespace forge
