#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "forge/core/budget.hpp"
#include "forge/core/error.hpp"
#include "forge/core/lp.hpp"
#include "forge/core/rational.hpp"
#include "forge/graph/graph.hpp"

namespace forge {

using RationalVector = std::vector<Rational>;

// (R^n, ||.||_G): ||a|| = max over i != j of |a_i| + |a_j| / (3 - chi_G(i,j)).
class GraphNorm {
 public:
  explicit GraphNorm(Graph g) : g_(std::move(g)) {}

  const Graph& graph() const noexcept { return g_; }
  int dim() const noexcept { return g_.n(); }
  int chi(int i, int j) const { return g_.has_edge(i, j) ? 1 : 0; }
  // 3 - chi
  int divisor(int i, int j) const { return 3 - chi(i, j); }

 private:
  Graph g_;
};

inline RationalVector unit_vector(int n, int p, int sign = 1) {
  if (p < 0 || p >= n) throw PreconditionError("coordinate out of range");
  RationalVector v(static_cast<std::size_t>(n), Rational(0));
  v[static_cast<std::size_t>(p)] = sign;
  return v;
}

inline Rational sup_norm(const RationalVector& v) {
  Rational m = 0;
  for (const auto& x : v) m = std::max(m, abs_value(x));
  return m;
}

inline Rational norm(const GraphNorm& nm, const RationalVector& v) {
  const int n = nm.dim();
  if (static_cast<int>(v.size()) != n) throw MalformedInput("vector", "dimension does not match the graph");
  if (n < 2) throw PreconditionError("graph norm needs at least two coordinates");
  Rational best = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) best = std::max(best, Rational(abs_value(v[static_cast<std::size_t>(i)]) + abs_value(v[static_cast<std::size_t>(j)]) / nm.divisor(i, j)));
  return best;
}

// ||v||_inf <= ||v||_G <= 3/2 ||v||_inf
inline bool sandwich_check(const GraphNorm& nm, const RationalVector& v) {
  const Rational s = sup_norm(v), g = norm(nm, v);
  return s <= g && g <= s * Rational(3, 2);
}

namespace detail {

// Rows a.x <= b describing ||x||_G <= r, one per ordered pair and sign pattern.
inline void unit_ball_rows(const GraphNorm& nm, RationalMatrix& rows, std::vector<Rational>& rhs) {
  const int n = nm.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          std::vector<Rational> row(static_cast<std::size_t>(n), Rational(0));
          row[static_cast<std::size_t>(i)] = si;
          row[static_cast<std::size_t>(j)] = Rational(sj, nm.divisor(i, j));
          rows.push_back(std::move(row));
          rhs.push_back(1);
        }
    }
}

}  // namespace detail

// Vertices of {||x||_G <= 1}, by solving every n-subset of facet rows;
// returned sorted. Meant for n <= 4.
inline std::vector<RationalVector> unit_ball_vertices(const GraphNorm& nm) {
  const int n = nm.dim();
  if (n < 2 || n > 4) throw PreconditionError("unit_ball_vertices supports dimensions 2..4");
  RationalMatrix rows;
  std::vector<Rational> rhs;
  detail::unit_ball_rows(nm, rows, rhs);
  std::set<RationalVector> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n));
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t from) {
    if (k == pick.size()) {
      RationalMatrix m;
      std::vector<Rational> b;
      for (auto r : pick) {
        m.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
      auto x = solve_linear(m, b);
      if (x && norm(nm, *x) <= 1) out.insert(*x);
      return;
    }
    for (std::size_t r = from; r < rows.size(); ++r) {
      pick[k] = r;
      rec(k + 1, r + 1);
    }
  };
  rec(0, 0);
  return {out.begin(), out.end()};
}

// With delta = eps/18: every y, z in the unit ball with
// ||x - (y+z)/2|| <= delta, x = sign * e_p, has ||y - z|| <= eps.
//
// The feasible (y, z) form a polytope P and ||y - z|| is a maximum of the
// linear forms s_i (y_i - z_i) + s_j (y_j - z_j) / (3 - chi(i,j)); each is
// maximized exactly over P by the simplex method, so max_gap is the exact
// supremum and is attained at the recorded vertex (y, z). P is symmetric
// under y <-> z, so s_i = +1 suffices.
struct StronglyExtremeCertificate {
  int p = 0;
  int sign = 1;
  Rational epsilon;
  Rational delta;
  Rational max_gap;      // exact max of ||y - z|| over P
  Rational chain_bound;  // 12 delta + 12 delta / 2
  RationalVector y, z;   // a maximizing pair
  std::size_t programs = 0;
  std::size_t vertices_visited = 0;  // simplex bases, summed over programs
  bool valid = false;
};

inline StronglyExtremeCertificate strongly_extreme_certificate(const GraphNorm& nm, int p, const Rational& eps, int sign = 1) {
  const int n = nm.dim();
  if (n < 2) throw PreconditionError("graph norm needs at least two coordinates");
  if (p < 0 || p >= n) throw PreconditionError("coordinate out of range");
  if (eps <= 0) throw PreconditionError("epsilon must be positive");
  if (sign != 1 && sign != -1) throw PreconditionError("sign must be +1 or -1");

  StronglyExtremeCertificate cert;
  cert.p = p;
  cert.sign = sign;
  cert.epsilon = eps;
  cert.delta = eps / 18;
  cert.chain_bound = 12 * cert.delta + 12 * cert.delta / 2;

  // Variables, all >= 0: y' = y + 1, z' = z + 1 (coordinates lie in
  // [-1, 1]) and moduli a^y, a^z, a^w bounding |y|, |z|, |w| coordinatewise,
  // w = x - (y + z)/2. Layout: y' | z' | a^y | a^z | a^w.
  const std::size_t N = static_cast<std::size_t>(n);
  const std::size_t nv = 5 * N;
  auto Y = [&](int i) { return static_cast<std::size_t>(i); };
  auto Z = [&](int i) { return N + static_cast<std::size_t>(i); };
  auto AY = [&](int i) { return 2 * N + static_cast<std::size_t>(i); };
  auto AZ = [&](int i) { return 3 * N + static_cast<std::size_t>(i); };
  auto AW = [&](int i) { return 4 * N + static_cast<std::size_t>(i); };
  RationalMatrix a;
  std::vector<Rational> b;
  auto row = [&](std::initializer_list<std::pair<std::size_t, Rational>> terms, Rational rhs) {
    std::vector<Rational> r(nv, Rational(0));
    for (const auto& [k, v] : terms) r[k] += v;
    a.push_back(std::move(r));
    b.push_back(std::move(rhs));
  };
  for (int i = 0; i < n; ++i) {
    // |y_i| <= a^y_i with y_i = y'_i - 1
    row({{Y(i), 1}, {AY(i), -1}}, 1);
    row({{Y(i), -1}, {AY(i), -1}}, -1);
    row({{Z(i), 1}, {AZ(i), -1}}, 1);
    row({{Z(i), -1}, {AZ(i), -1}}, -1);
    // w_i = x_i + 1 - (y'_i + z'_i)/2
    const Rational xi1 = Rational(i == p ? sign : 0) + 1;
    row({{Y(i), Rational(-1, 2)}, {Z(i), Rational(-1, 2)}, {AW(i), -1}}, -xi1);
    row({{Y(i), Rational(1, 2)}, {Z(i), Rational(1, 2)}, {AW(i), -1}}, xi1);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Rational inv(1, nm.divisor(i, j));
      row({{AY(i), 1}, {AY(j), inv}}, 1);
      row({{AZ(i), 1}, {AZ(j), inv}}, 1);
      row({{AW(i), 1}, {AW(j), inv}}, cert.delta);
    }

  bool first = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int sj : {1, -1}) {
        std::vector<Rational> c(nv, Rational(0));
        const Rational inv(sj, nm.divisor(i, j));
        c[Y(i)] += 1;
        c[Z(i)] -= 1;
        c[Y(j)] += inv;
        c[Z(j)] -= inv;
        auto res = maximize(a, b, c);
        ++cert.programs;
        cert.vertices_visited += res.pivots + 1;
        if (res.status != LpResult::Status::Optimal) throw Error("strongly_extreme_certificate: program not solved to optimality");
        if (first || res.value > cert.max_gap) {
          first = false;
          cert.max_gap = res.value;
          cert.y.assign(N, Rational(0));
          cert.z.assign(N, Rational(0));
          for (int k = 0; k < n; ++k) {
            cert.y[static_cast<std::size_t>(k)] = res.x[Y(k)] - 1;
            cert.z[static_cast<std::size_t>(k)] = res.x[Z(k)] - 1;
          }
        }
      }
    }
  cert.valid = cert.max_gap <= eps;
  return cert;
}

// Re-checks the recorded maximizer against the norm directly.
inline bool revalidate(const GraphNorm& nm, const StronglyExtremeCertificate& c) {
  const int n = nm.dim();
  if (static_cast<int>(c.y.size()) != n || static_cast<int>(c.z.size()) != n) return false;
  RationalVector mid(static_cast<std::size_t>(n)), gap(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto K = static_cast<std::size_t>(k);
    mid[K] = (k == c.p ? Rational(c.sign) : Rational(0)) - (c.y[K] + c.z[K]) / 2;
    gap[K] = c.y[K] - c.z[K];
  }
  return norm(nm, c.y) <= 1 && norm(nm, c.z) <= 1 && norm(nm, mid) <= c.delta && norm(nm, gap) == c.max_gap && c.delta == c.epsilon / 18 &&
         c.valid == (c.max_gap <= c.epsilon);
}

// h'(e_p) = signs[p] e_{map[p]}
struct SignedMap {
  std::vector<int> map;
  std::vector<int> signs;

  friend bool operator==(const SignedMap&, const SignedMap&) = default;
};

inline RationalVector apply(const SignedMap& h, const RationalVector& v, int target_dim) {
  RationalVector out(static_cast<std::size_t>(target_dim), Rational(0));
  for (std::size_t p = 0; p < v.size(); ++p) out[static_cast<std::size_t>(h.map[p])] += h.signs[p] * v[p];
  return out;
}

// Whether h' preserves the norm on {e_p} and {s_p e_p + s_q e_q}, p != q,
// over the assigned prefix 0..upto-1.
inline bool preserves_probes(const GraphNorm& a, const GraphNorm& b, const SignedMap& h, int upto) {
  const int n = a.dim();
  for (int p = 0; p < upto; ++p) {
    auto e = unit_vector(n, p);
    if (norm(a, e) != norm(b, apply(h, e, b.dim()))) return false;
    for (int q = 0; q < p; ++q)
      for (int sp : {1, -1})
        for (int sq : {1, -1}) {
          RationalVector v(static_cast<std::size_t>(n), Rational(0));
          v[static_cast<std::size_t>(p)] = sp;
          v[static_cast<std::size_t>(q)] = sq;
          if (norm(a, v) != norm(b, apply(h, v, b.dim()))) return false;
        }
  }
  return true;
}

namespace detail {

// norms of s e_p (p == q) and s e_p + t e_q (p != q), indexed [p][q][s][t]
// with index 0 for sign +1 and 1 for -1
inline std::vector<Rational> probe_table(const GraphNorm& nm) {
  const int n = nm.dim();
  std::vector<Rational> out(static_cast<std::size_t>(n * n * 4));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
          RationalVector v(static_cast<std::size_t>(n), Rational(0));
          v[static_cast<std::size_t>(p)] += s ? -1 : 1;
          if (p != q) v[static_cast<std::size_t>(q)] += t ? -1 : 1;
          out[static_cast<std::size_t>(((p * n + q) * 2 + s) * 2 + t)] = norm(nm, v);
        }
  return out;
}

}  // namespace detail

// First (map, signs) in lexicographic order of (map[0], signs[0], map[1],
// ...) whose induced linear map preserves the probe norms. The probe images
// are again signed pairs, so both sides are read from precomputed tables.
inline std::optional<SignedMap> signed_isometric_embedding(const GraphNorm& a, const GraphNorm& b, const Budget& budget = default_budget()) {
  const int n = a.dim(), m = b.dim();
  if (n > m) return std::nullopt;
  if (n < 2 || m < 2) throw PreconditionError("graph norm needs at least two coordinates");
  const auto ta = detail::probe_table(a), tb = detail::probe_table(b);
  auto at = [](const std::vector<Rational>& t, int dim, int p, int q, int s, int u) -> const Rational& {
    return t[static_cast<std::size_t>(((p * dim + q) * 2 + s) * 2 + u)];
  };
  SignedMap h{std::vector<int>(static_cast<std::size_t>(n), 0), std::vector<int>(static_cast<std::size_t>(n), 1)};
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  NodeCounter counter(budget);
  std::function<bool(int)> rec = [&](int p) {
    if (p == n) return true;
    counter.tick("signed isometric embedding search");
    for (int t = 0; t < m; ++t) {
      if (used[static_cast<std::size_t>(t)]) continue;
      for (int e : {1, -1}) {
        const int ep = e < 0;
        // Only probes touching p are new.
        bool ok = at(ta, n, p, p, 0, 0) == at(tb, m, t, t, ep, 0);
        for (int q = 0; q < p && ok; ++q) {
          const int hq = h.map[static_cast<std::size_t>(q)], eq = h.signs[static_cast<std::size_t>(q)] < 0;
          for (int sp = 0; sp < 2 && ok; ++sp)
            for (int sq = 0; sq < 2 && ok; ++sq) ok = at(ta, n, p, q, sp, sq) == at(tb, m, t, hq, sp ^ ep, sq ^ eq);
        }
        if (!ok) continue;
        h.map[static_cast<std::size_t>(p)] = t;
        h.signs[static_cast<std::size_t>(p)] = e;
        used[static_cast<std::size_t>(t)] = 1;
        if (rec(p + 1)) return true;
        used[static_cast<std::size_t>(t)] = 0;
      }
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return h;
}

// The finite echo of S(X_G): points k = 0..2n-1 with f_{2p} = e_p and
// f_{2p+1} = -e_p; for each coefficient tuple alpha of length 1..3 over
// {0, +-1, +-1/2} and each point tuple k the value ||sum alpha_i f_{k_i}||.
// R^alpha_q(k) holds iff value < q, for q in the grid.
struct NormStructure {
  int n = 0;  // dimension
  std::vector<std::vector<Rational>> coefficients;
  // values[c][index of k] with k read in base 2n, k_0 most significant
  std::vector<std::vector<Rational>> values;
  std::vector<Rational> grid;  // realized values, consecutive midpoints, 2 * max + 1

  int points() const noexcept { return 2 * n; }
  RationalVector point(int k) const { return unit_vector(n, k / 2, k % 2 ? -1 : 1); }
  bool O(int k, int l) const { return k != l && k / 2 == l / 2; }

  std::size_t tuple_index(const std::vector<int>& k) const {
    std::size_t idx = 0;
    for (int x : k) idx = idx * static_cast<std::size_t>(points()) + static_cast<std::size_t>(x);
    return idx;
  }
  const Rational& value(std::size_t c, const std::vector<int>& k) const { return values[c][tuple_index(k)]; }
  bool R(std::size_t c, const Rational& q, const std::vector<int>& k) const { return value(c, k) < q; }
};

inline std::vector<std::vector<Rational>> probe_coefficients() {
  const std::array<Rational, 5> vals{Rational(0), Rational(1), Rational(-1), Rational(1, 2), Rational(-1, 2)};
  std::vector<std::vector<Rational>> out;
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<std::size_t> digit(len, 0);
    for (;;) {
      std::vector<Rational> c;
      for (auto d : digit) c.push_back(vals[d]);
      out.push_back(std::move(c));
      std::size_t k = len;
      while (k > 0 && ++digit[k - 1] == vals.size()) digit[--k] = 0;
      if (k == 0) break;
    }
  }
  return out;
}

inline NormStructure build_norm_structure(const GraphNorm& nm, const Budget& budget = default_budget()) {
  NormStructure s;
  s.n = nm.dim();
  if (s.n < 2) throw PreconditionError("graph norm needs at least two coordinates");
  s.coefficients = probe_coefficients();
  const std::size_t pts = static_cast<std::size_t>(s.points());
  std::size_t total = 0;
  for (const auto& c : s.coefficients) {
    std::size_t k = 1;
    for (std::size_t i = 0; i < c.size(); ++i) k *= pts;
    total += k;
  }
  budget.check_instances(total, "norm structure probe tuples");
  std::set<Rational> realized;
  for (const auto& c : s.coefficients) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < c.size(); ++i) count *= pts;
    std::vector<Rational> vals(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      RationalVector v(static_cast<std::size_t>(s.n), Rational(0));
      std::size_t rest = idx;
      for (std::size_t i = c.size(); i-- > 0;) {
        const auto k = static_cast<int>(rest % pts);
        rest /= pts;
        v[static_cast<std::size_t>(k / 2)] += (k % 2 ? -1 : 1) * c[i];
      }
      vals[idx] = norm(nm, v);
      realized.insert(vals[idx]);
    }
    s.values.push_back(std::move(vals));
  }
  std::vector<Rational> rs(realized.begin(), realized.end());
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (k > 0) s.grid.push_back((rs[k - 1] + rs[k]) / 2);
    if (rs[k] > 0) s.grid.push_back(rs[k]);
  }
  s.grid.push_back(2 * rs.back() + 1);
  return s;
}

// Whether S(X_G) has an automorphism extending k -> seq[k]: each entry is
// fixed or sent to its opposite. Exact for rigid G; with symmetries of G
// the structure has more automorphisms than this admits.
inline bool can_extend_norm_auto(const NormStructure& s, const std::vector<int>& seq) {
  std::set<int> seen;
  for (int x : seq) {
    if (x < 0 || x >= s.points()) throw PreconditionError("sequence entry out of range");
    if (!seen.insert(x).second) throw PreconditionError("sequence must be injective");
  }
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (seq[i] != static_cast<int>(i) && !s.O(seq[i], static_cast<int>(i))) return false;
  return true;
}

}  // namespace forge
