#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forge/core/error.hpp"
#include "forge/core/sequences.hpp"
#include "forge/epi/epi_gadget.hpp"
#include "forge/graph/graph.hpp"

namespace forge {

// omega^{a_0} + omega^{a_1} + ..., every point of block i colored c_i.
struct ColoredBlock {
  std::uint64_t exponent = 0;
  std::uint64_t color = 0;

  friend bool operator==(const ColoredBlock&, const ColoredBlock&) = default;
};

struct ColoredOrdinalSum {
  std::vector<ColoredBlock> blocks;

  std::size_t size() const noexcept { return blocks.size(); }
  friend bool operator==(const ColoredOrdinalSum&, const ColoredOrdinalSum&) = default;
};

// The relation R applied as c(n) R c'(g(n)): source color on the left.
class ColorRelation {
 public:
  enum class Kind { Equality, Geq, Table };

  static ColorRelation equality() { return ColorRelation(Kind::Equality); }
  static ColorRelation geq() { return ColorRelation(Kind::Geq); }
  // table[x][y] says x R y; colors outside the table are unrelated.
  static ColorRelation table(std::vector<std::vector<bool>> rows) {
    for (const auto& r : rows)
      if (r.size() != rows.size()) throw PreconditionError("relation table must be square");
    ColorRelation rel(Kind::Table);
    rel.table_ = std::move(rows);
    return rel;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::vector<bool>>& rows() const noexcept { return table_; }

  bool holds(std::uint64_t x, std::uint64_t y) const {
    switch (kind_) {
      case Kind::Equality: return x == y;
      case Kind::Geq: return x >= y;
      case Kind::Table: return x < table_.size() && y < table_.size() && table_[x][y];
    }
    return false;
  }

  // Same relation presented as a table on colors 0..m-1.
  ColorRelation as_table(std::size_t m) const {
    std::vector<std::vector<bool>> rows(m, std::vector<bool>(m));
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) rows[x][y] = holds(x, y);
    return table(std::move(rows));
  }

 private:
  explicit ColorRelation(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<std::vector<bool>> table_;
};

// phi[i] is the target block receiving source block i.
using BlockAssignment = std::vector<std::size_t>;

// The assignment criterion: phi monotone, colors related, a_i <= b_phi(i),
// and every source block except the last one sharing a target block is
// strictly below it. Sufficient because omega^x + omega^b = omega^b for
// x < b; necessary because the final segment of an indecomposable image
// lies in one block.
inline bool is_valid_assignment(const ColoredOrdinalSum& a, const ColoredOrdinalSum& b, const ColorRelation& r, const BlockAssignment& phi) {
  if (phi.size() != a.size()) return false;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] >= b.size()) return false;
    const auto& src = a.blocks[i];
    const auto& dst = b.blocks[phi[i]];
    if (!r.holds(src.color, dst.color) || src.exponent > dst.exponent) return false;
    if (i + 1 < phi.size()) {
      if (phi[i + 1] < phi[i]) return false;
      if (phi[i + 1] == phi[i] && src.exponent == dst.exponent) return false;
    }
  }
  return true;
}

// Leftmost placement. After placing a block at j the state is (j, tight),
// tight meaning the block matched b_j's exponent; states are totally
// ordered by what they still allow ((j, loose) > (j, tight) = (j+1, loose)),
// so taking the first feasible target for every block is optimal.
inline std::optional<BlockAssignment> embeds(const ColoredOrdinalSum& a, const ColoredOrdinalSum& b, const ColorRelation& r) {
  BlockAssignment phi;
  std::size_t j = 0;
  bool tight = false;
  for (const auto& src : a.blocks) {
    if (tight) ++j;
    while (j < b.size() && !(r.holds(src.color, b.blocks[j].color) && src.exponent <= b.blocks[j].exponent)) ++j;
    if (j == b.size()) return std::nullopt;
    phi.push_back(j);
    tight = src.exponent == b.blocks[j].exponent;
  }
  return phi;
}

// (psi o phi): A -> C from phi: A -> B and psi: B -> C.
inline BlockAssignment compose(const BlockAssignment& phi, const BlockAssignment& psi) {
  BlockAssignment out;
  for (auto j : phi) {
    if (j >= psi.size()) throw PreconditionError("assignments do not compose");
    out.push_back(psi[j]);
  }
  return out;
}

// Drops every block absorbed by an equally colored, strictly larger right
// neighbour (omega^x + omega^y = omega^y for x < y), to fixpoint.
inline ColoredOrdinalSum normal_form(const ColoredOrdinalSum& a) {
  ColoredOrdinalSum out;
  for (const auto& blk : a.blocks) {
    while (!out.blocks.empty() && out.blocks.back().color == blk.color && out.blocks.back().exponent < blk.exponent) out.blocks.pop_back();
    out.blocks.push_back(blk);
  }
  return out;
}

inline bool iso_colored(const ColoredOrdinalSum& a, const ColoredOrdinalSum& b) { return normal_form(a) == normal_form(b); }

// k_n = i where n = <i, j> under Cantor pairing: every natural recurs
// infinitely often.
inline std::uint64_t cantor_k(std::uint64_t n) {
  std::uint64_t w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0);
  while (w * (w + 1) / 2 > n) --w;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  const std::uint64_t j = n - w * (w + 1) / 2;
  return w - j;
}

inline Seq lambda_of(const Seq& t) {
  Seq out;
  for (int x : t) out.push_back(static_cast<int>(cantor_k(static_cast<std::uint64_t>(x))));
  return out;
}

// tau_G(lambda_t) for every nonempty t in {0..b-1}^{<=d}, in lexicographic
// order; entries of lambda_t are read mod |G|.
inline std::vector<std::uint64_t> lg_profile(const Graph& g, int d, int b) {
  if (g.n() == 0) throw PreconditionError("graph must be nonempty");
  if (d < 0 || b < 1) throw PreconditionError("truncation needs d >= 0 and b >= 1");
  std::vector<std::uint64_t> out;
  for (const auto& t : sequences_preorder(static_cast<std::size_t>(d), b))
    if (!t.empty()) out.push_back(block_type(g, lambda_of(t)));
  return out;
}

// L_G: the block of t has type omega^{2 tau} and color tau.
inline ColoredOrdinalSum build_LG(const Graph& g, int d, int b) {
  ColoredOrdinalSum out;
  for (auto tau : lg_profile(g, d, b)) out.blocks.push_back({2 * tau, tau});
  return out;
}

struct IdentityViolation {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::string detail;
};

struct IdentityReport {
  std::size_t instances = 0;
  std::vector<IdentityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Over all ordered pairs: colored isomorphism of L_G, L_H, literal equality
// of their block sequences, and equality of the tau-profiles coincide.
inline IdentityReport verify_identity_lemma(const std::vector<Graph>& corpus, int d, int b) {
  std::vector<ColoredOrdinalSum> orders;
  std::vector<std::vector<std::uint64_t>> profiles;
  for (const auto& g : corpus) {
    orders.push_back(build_LG(g, d, b));
    profiles.push_back(lg_profile(g, d, b));
  }
  IdentityReport rep;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      ++rep.instances;
      bool iso = iso_colored(orders[i], orders[j]);
      bool equal = orders[i] == orders[j];
      bool same_profile = profiles[i] == profiles[j];
      if (iso != equal || equal != same_profile)
        rep.violations.push_back({i, j, "iso=" + std::to_string(iso) + " equal=" + std::to_string(equal) + " profile=" + std::to_string(same_profile)});
    }
  return rep;
}

}  // namespace forge
