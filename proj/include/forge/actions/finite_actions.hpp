#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forge/core/budget.hpp"
#include "forge/core/error.hpp"

namespace forge {

using Perm = std::vector<int>;

inline Perm identity_perm(int n) {
  Perm p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline bool is_perm(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int x : p) {
    if (x < 0 || static_cast<std::size_t>(x) >= p.size() || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = 1;
  }
  return true;
}

// (a * b)(x) = a(b(x))
inline Perm operator*(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw PreconditionError("permutations of different degree");
  Perm out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = a[static_cast<std::size_t>(b[x])];
  return out;
}

inline Perm inverse(const Perm& p) {
  Perm out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[static_cast<std::size_t>(p[x])] = static_cast<int>(x);
  return out;
}

// A permutation group on {0..degree-1}, given by generators. Groups here are
// small, so the element set is enumerated once and cached.
class PermGroup {
 public:
  PermGroup(int degree, std::vector<Perm> gens, const Budget& budget = default_budget()) : degree_(degree), gens_(std::move(gens)) {
    if (degree < 0) throw PreconditionError("negative degree");
    for (const auto& g : gens_)
      if (static_cast<int>(g.size()) != degree || !is_perm(g)) throw MalformedInput("gens", "not a permutation of the given degree");
    elements_.insert(identity_perm(degree));
    std::vector<Perm> frontier{identity_perm(degree)};
    while (!frontier.empty()) {
      std::vector<Perm> next;
      for (const auto& x : frontier)
        for (const auto& g : gens_) {
          Perm y = g * x;
          if (elements_.insert(y).second) {
            budget.check_instances(elements_.size(), "group elements");
            next.push_back(std::move(y));
          }
        }
      frontier = std::move(next);
    }
  }

  int degree() const noexcept { return degree_; }
  const std::vector<Perm>& generators() const noexcept { return gens_; }
  const std::set<Perm>& elements() const noexcept { return elements_; }
  std::size_t order() const noexcept { return elements_.size(); }
  bool contains(const Perm& p) const { return elements_.count(p) > 0; }

 private:
  int degree_;
  std::vector<Perm> gens_;
  std::set<Perm> elements_;
};

// Y acting on W = {0..degree-1} by a(y, w) = y(w).
struct PermGroupAction {
  PermGroup group;

  int apply(const Perm& y, int w) const { return y[static_cast<std::size_t>(w)]; }
};

inline std::vector<int> orbit(const PermGroup& y, int w) {
  std::set<int> seen{w};
  std::vector<int> out{w};
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& g : y.generators()) {
      int v = g[static_cast<std::size_t>(out[k])];
      if (seen.insert(v).second) out.push_back(v);
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Stab_Y(w) from Schreier generators u_{g(x)}^{-1} g u_x, u_x a fixed group
// element carrying w to x. Checks |Y| = |orbit| |stabilizer|.
inline PermGroup stabilizer(const PermGroupAction& a, int w) {
  const PermGroup& y = a.group;
  if (w < 0 || w >= y.degree()) throw PreconditionError("point outside W");
  std::map<int, Perm> u{{w, identity_perm(y.degree())}};
  std::vector<int> queue{w};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (const auto& g : y.generators()) {
      int x = queue[k], gx = g[static_cast<std::size_t>(x)];
      if (!u.count(gx)) {
        u.emplace(gx, g * u.at(x));
        queue.push_back(gx);
      }
    }
  std::set<Perm> gens;
  const Perm id = identity_perm(y.degree());
  for (const auto& [x, ux] : u)
    for (const auto& g : y.generators()) {
      Perm s = inverse(u.at(g[static_cast<std::size_t>(x)])) * g * ux;
      if (s != id) gens.insert(std::move(s));
    }
  PermGroup stab(y.degree(), {gens.begin(), gens.end()});
  if (stab.order() * u.size() != y.order()) throw Error("orbit-stabilizer count failed");
  return stab;
}

// s(y) = least element of the left coset yH; constant on cosets, s(y) in yH.
struct CosetSelector {
  std::map<Perm, Perm> select;
  std::vector<Perm> transversal;  // {y : s(y) = y}, ascending

  const Perm& operator()(const Perm& y) const {
    auto it = select.find(y);
    if (it == select.end()) throw PreconditionError("element outside the group");
    return it->second;
  }
};

inline CosetSelector coset_selector(const PermGroup& y, const PermGroup& h) {
  if (h.degree() != y.degree()) throw PreconditionError("subgroup of a different degree");
  for (const auto& g : h.generators())
    if (!y.contains(g)) throw PreconditionError("H is not a subgroup of Y");
  CosetSelector s;
  for (const auto& x : y.elements()) {
    if (s.select.count(x)) continue;
    std::vector<Perm> coset;
    for (const auto& k : h.elements()) coset.push_back(x * k);
    const Perm rep = *std::min_element(coset.begin(), coset.end());
    for (auto& c : coset) s.select.emplace(std::move(c), rep);
    s.transversal.push_back(rep);
  }
  std::sort(s.transversal.begin(), s.transversal.end());
  return s;
}

// B = {0..b-1} instances, Z = {0..z-1} codes, W the action's points,
// f: B -> Z, g: Z -> W, E given by a class id per code.
struct ReductionSetup {
  int b = 0;
  int z = 0;
  std::vector<int> f;
  std::vector<int> g;
  std::vector<int> e_class;
};

// Which hypothesis fails, or none: shapes, f injective, g reduces E to the
// orbit equivalence of the action, f(B) pairwise E-inequivalent.
inline std::optional<std::string> validate_setup(const ReductionSetup& r, const PermGroupAction& a) {
  if (static_cast<int>(r.f.size()) != r.b) return "f must have one entry per instance";
  if (static_cast<int>(r.g.size()) != r.z || static_cast<int>(r.e_class.size()) != r.z) return "g and E must have one entry per code";
  for (int v : r.f)
    if (v < 0 || v >= r.z) return "f maps outside Z";
  for (int w : r.g)
    if (w < 0 || w >= a.group.degree()) return "g maps outside W";
  if (std::set<int>(r.f.begin(), r.f.end()).size() != r.f.size()) return "f is not injective";
  std::vector<int> orbit_of(static_cast<std::size_t>(a.group.degree()), -1);
  for (int w = 0; w < a.group.degree(); ++w)
    if (orbit_of[static_cast<std::size_t>(w)] < 0)
      for (int v : orbit(a.group, w)) orbit_of[static_cast<std::size_t>(v)] = w;
  for (int x = 0; x < r.z; ++x)
    for (int y = 0; y < r.z; ++y) {
      bool e = r.e_class[static_cast<std::size_t>(x)] == r.e_class[static_cast<std::size_t>(y)];
      bool o = orbit_of[static_cast<std::size_t>(r.g[static_cast<std::size_t>(x)])] == orbit_of[static_cast<std::size_t>(r.g[static_cast<std::size_t>(y)])];
      if (e != o) return "g does not reduce E to orbit equivalence (codes " + std::to_string(x) + ", " + std::to_string(y) + ")";
    }
  for (std::size_t i = 0; i < r.f.size(); ++i)
    for (std::size_t j = i + 1; j < r.f.size(); ++j)
      if (r.e_class[static_cast<std::size_t>(r.f[i])] == r.e_class[static_cast<std::size_t>(r.f[j])])
        return "f(B) is not pairwise E-inequivalent (instances " + std::to_string(i) + ", " + std::to_string(j) + ")";
  return std::nullopt;
}

// E-saturation of f(B) read straight off the E-classes.
inline std::vector<int> direct_saturation(const ReductionSetup& r) {
  std::set<int> classes;
  for (int v : r.f) classes.insert(r.e_class[static_cast<std::size_t>(v)]);
  std::vector<int> out;
  for (int x = 0; x < r.z; ++x)
    if (classes.count(r.e_class[static_cast<std::size_t>(x)])) out.push_back(x);
  return out;
}

struct SaturationResult {
  std::vector<int> p;       // the uniqueness set
  std::size_t t_size = 0;   // |T|
  std::vector<int> direct;  // direct saturation
  std::vector<int> missing;  // in direct, not in p
  std::vector<int> extra;    // in p, not in direct
  bool agrees() const { return missing.empty() && extra.empty(); }
};

// T = {(G, y) : y selected for Sigma(G) = Stab(g(f(G)))} and
// P = {z : exactly one (G, y) in T has a(y, g(f(G))) = g(z)}.
// With check set, a failed hypothesis throws naming it; without, the
// construction runs anyway and the comparison shows what broke.
inline SaturationResult saturation_by_uniqueness(const ReductionSetup& r, const PermGroupAction& a, bool check = true) {
  if (check)
    if (auto why = validate_setup(r, a)) throw PreconditionError("reduction setup: " + *why);
  std::vector<int> hits(static_cast<std::size_t>(a.group.degree()), 0);
  SaturationResult out;
  for (int inst = 0; inst < r.b; ++inst) {
    const int w = r.g[static_cast<std::size_t>(r.f[static_cast<std::size_t>(inst)])];
    auto sel = coset_selector(a.group, stabilizer(a, w));
    for (const auto& y : sel.transversal) {
      ++out.t_size;
      ++hits[static_cast<std::size_t>(a.apply(y, w))];
    }
  }
  for (int x = 0; x < r.z; ++x)
    if (hits[static_cast<std::size_t>(r.g[static_cast<std::size_t>(x)])] == 1) out.p.push_back(x);
  out.direct = direct_saturation(r);
  std::set_difference(out.direct.begin(), out.direct.end(), out.p.begin(), out.p.end(), std::back_inserter(out.missing));
  std::set_difference(out.p.begin(), out.p.end(), out.direct.begin(), out.direct.end(), std::back_inserter(out.extra));
  return out;
}

// Seeded random setups: Y is a cyclic, dihedral, symmetric (k <= 4) or
// alternating (k = 4) group, W a disjoint union of copies of its natural
// action, its action on 2-subsets and fixed points (|W| <= 12), E the
// pullback of orbit equivalence along a random g, and f picks codes from
// distinct E-classes.
struct RandomSetup {
  PermGroupAction action;
  ReductionSetup setup;
  std::string family;
};

namespace detail {

inline std::pair<std::string, std::vector<Perm>> random_natural_group(std::mt19937& rng) {
  auto cycle = [](int k) {
    Perm p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = (i + 1) % k;
    return p;
  };
  auto reflection = [](int k) {
    Perm p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = (k - i) % k;
    return p;
  };
  auto swap01 = [](int k) {
    Perm p = identity_perm(k);
    std::swap(p[0], p[1]);
    return p;
  };
  switch (rng() % 4) {
    case 0: {
      int k = 2 + static_cast<int>(rng() % 11);
      return {"C" + std::to_string(k), {cycle(k)}};
    }
    case 1: {
      int k = 3 + static_cast<int>(rng() % 10);
      return {"D" + std::to_string(k), {cycle(k), reflection(k)}};
    }
    case 2: {
      int k = 3 + static_cast<int>(rng() % 2);
      return {"S" + std::to_string(k), {cycle(k), swap01(k)}};
    }
    default:
      return {"A4", {{1, 2, 0, 3}, {0, 2, 3, 1}}};
  }
}

}  // namespace detail

inline RandomSetup random_setup(std::mt19937& rng, int max_b = 4) {
  auto [name, natural] = detail::random_natural_group(rng);
  const int k = static_cast<int>(natural[0].size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  // components: 0 natural, 1 two-subsets, 2 fixed point
  std::vector<int> parts{0};
  int size = k;
  for (int tries = 0; tries < 4; ++tries) {
    int c = static_cast<int>(rng() % 3);
    int add = c == 0 ? k : c == 1 ? static_cast<int>(pairs.size()) : 1;
    if (size + add <= 12) {
      parts.push_back(c);
      size += add;
    }
  }
  std::vector<Perm> gens(natural.size());
  for (std::size_t gi = 0; gi < natural.size(); ++gi) {
    const Perm& n = natural[gi];
    int base = 0;
    for (int c : parts) {
      if (c == 0) {
        for (int i = 0; i < k; ++i) gens[gi].push_back(base + n[static_cast<std::size_t>(i)]);
        base += k;
      } else if (c == 1) {
        for (auto [i, j] : pairs) {
          std::pair<int, int> img{std::min(n[static_cast<std::size_t>(i)], n[static_cast<std::size_t>(j)]),
                                  std::max(n[static_cast<std::size_t>(i)], n[static_cast<std::size_t>(j)])};
          gens[gi].push_back(base + static_cast<int>(std::find(pairs.begin(), pairs.end(), img) - pairs.begin()));
        }
        base += static_cast<int>(pairs.size());
      } else {
        gens[gi].push_back(base++);
      }
    }
  }
  RandomSetup out{PermGroupAction{PermGroup(size, gens)}, {}, name};
  ReductionSetup& r = out.setup;
  r.z = 4 + static_cast<int>(rng() % 17);
  for (int x = 0; x < r.z; ++x) r.g.push_back(static_cast<int>(rng() % static_cast<unsigned>(size)));
  // E: orbit of g(x), classes numbered by first appearance
  std::map<int, int> class_of_orbit;
  for (int x = 0; x < r.z; ++x) {
    int rep = orbit(out.action.group, r.g[static_cast<std::size_t>(x)]).front();
    auto it = class_of_orbit.emplace(rep, static_cast<int>(class_of_orbit.size())).first;
    r.e_class.push_back(it->second);
  }
  std::vector<int> classes(class_of_orbit.size());
  std::iota(classes.begin(), classes.end(), 0);
  std::shuffle(classes.begin(), classes.end(), rng);
  r.b = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min<int>(max_b, static_cast<int>(classes.size()))));
  for (int i = 0; i < r.b; ++i) {
    std::vector<int> members;
    for (int x = 0; x < r.z; ++x)
      if (r.e_class[static_cast<std::size_t>(x)] == classes[static_cast<std::size_t>(i)]) members.push_back(x);
    r.f.push_back(members[rng() % members.size()]);
  }
  return out;
}

// Sends f's last instance to a code E-equivalent to f's first one (another
// code when the class has one, the same code otherwise, breaking injectivity).
inline ReductionSetup corrupt_setup(ReductionSetup r) {
  if (r.b < 1) throw PreconditionError("nothing to corrupt");
  const int first = r.f.front();
  int pick = first;
  for (int x = 0; x < r.z; ++x)
    if (x != first && r.e_class[static_cast<std::size_t>(x)] == r.e_class[static_cast<std::size_t>(first)]) pick = x;
  if (r.b == 1) {
    r.f.push_back(pick);
    r.b = 2;
  } else {
    r.f.back() = pick;
  }
  return r;
}

}  // namespace forge
