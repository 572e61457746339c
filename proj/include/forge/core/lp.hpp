#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "forge/core/error.hpp"
#include "forge/core/rational.hpp"

namespace forge {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Unique solution of the square system M x = rhs, or none when M is singular.
inline std::optional<std::vector<Rational>> solve_linear(RationalMatrix m, std::vector<Rational> rhs) {
  const std::size_t n = m.size();
  if (rhs.size() != n) throw PreconditionError("solve_linear: dimension mismatch");
  for (const auto& row : m)
    if (row.size() != n) throw PreconditionError("solve_linear: matrix must be square");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational k = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= k * m[col][c];
      rhs[r] -= k * rhs[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) rhs[r] /= m[r][r];
  return rhs;
}

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rational value;
  std::vector<Rational> x;
  std::size_t pivots = 0;
};

// maximize c.x subject to A x <= b, x >= 0, in exact arithmetic. Dictionary
// simplex with Bland's rule, so degenerate pivots cannot cycle; an auxiliary
// variable finds a feasible basis when some b_i < 0.
class ExactSimplex {
 public:
  ExactSimplex(const RationalMatrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c)
      : m_(b.size()), n_(c.size()), basis_(m_), nonbasis_(n_ + 1), d_(m_ + 2, std::vector<Rational>(n_ + 2)) {
    if (a.size() != m_) throw PreconditionError("LP: row count mismatch");
    for (std::size_t i = 0; i < m_; ++i) {
      if (a[i].size() != n_) throw PreconditionError("LP: column count mismatch");
      for (std::size_t j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      basis_[i] = static_cast<long>(n_ + i);
      d_[i][n_] = -1;
      d_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      d_[m_][j] = -c[j];
    }
    nonbasis_[n_] = -1;
    d_[m_ + 1][n_] = 1;
  }

  LpResult solve() {
    LpResult out;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    if (m_ > 0 && d_[r][n_ + 1] < 0) {
      pivot(r, n_);
      if (!run(true) || d_[m_ + 1][n_ + 1] < 0) {
        out.status = LpResult::Status::Infeasible;
        out.pivots = pivots_;
        return out;
      }
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] == -1) {
          std::optional<std::size_t> s;
          for (std::size_t j = 0; j <= n_; ++j)
            if (d_[i][j] != 0 && (!s || nonbasis_[j] < nonbasis_[*s])) s = j;
          if (s) pivot(i, *s);
        }
    }
    const bool bounded = run(false);
    out.pivots = pivots_;
    if (!bounded) {
      out.status = LpResult::Status::Unbounded;
      return out;
    }
    out.status = LpResult::Status::Optimal;
    out.x.assign(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) out.x[static_cast<std::size_t>(basis_[i])] = d_[i][n_ + 1];
    out.value = d_[m_][n_ + 1];
    return out;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    ++pivots_;
    const Rational inv = 1 / d_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || d_[i][s] == 0) continue;
      const Rational k = d_[i][s] * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j)
        if (j != s && d_[r][j] != 0) d_[i][j] -= d_[r][j] * k;
      d_[i][s] = -k;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    d_[r][s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Bland: entering variable of least index with a negative reduced cost,
  // leaving row by least ratio then least basic index.
  bool run(bool phase_one) {
    const std::size_t obj = phase_one ? m_ + 1 : m_;
    for (;;) {
      std::optional<std::size_t> s;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (!phase_one && nonbasis_[j] == -1) continue;
        if (d_[obj][j] < 0 && (!s || nonbasis_[j] < nonbasis_[*s])) s = j;
      }
      if (!s) return true;
      std::optional<std::size_t> r;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (d_[i][*s] <= 0) continue;
        Rational ratio = d_[i][n_ + 1] / d_[i][*s];
        if (!r || ratio < best || (ratio == best && basis_[i] < basis_[*r])) {
          r = i;
          best = ratio;
        }
      }
      if (!r) return false;
      pivot(*r, *s);
    }
  }

  std::size_t m_, n_;
  std::vector<long> basis_, nonbasis_;
  RationalMatrix d_;
  std::size_t pivots_ = 0;
};

inline LpResult maximize(const RationalMatrix& a, const std::vector<Rational>& b, const std::vector<Rational>& c) {
  return ExactSimplex(a, b, c).solve();
}

}  // namespace forge
