#pragma once

#include <string>

#include "forge/core/hash.hpp"
#include "forge/graph/json.hpp"
#include "forge/trees/le_max.hpp"
#include "forge/trees/normal_tree.hpp"

namespace forge {

// {"d":D,"b":B,"nodes":[["u",[s...]],...]}; triple trees carry ["u","v",[s...]].
template <int Arity>
Json to_json(const NormalTree<Arity>& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes()) {
    Json entry = Json::array();
    for (const auto& u : n.u) entry.push_back(bits_to_string(u));
    entry.push_back(n.s);
    nodes.push_back(entry);
  }
  return Json{{"d", t.depth()}, {"b", t.bound()}, {"nodes", nodes}};
}

template <int Arity>
NormalTree<Arity> normal_tree_from_json(const Json& j, const std::string& where = "") {
  int d = detail::require_int(detail::require(j, "d", where), where + "/d");
  int b = detail::require_int(detail::require(j, "b", where), where + "/b");
  if (d < 0 || d > 8) throw MalformedInput(where + "/d", "depth out of range");
  if (b < 1 || b > 64) throw MalformedInput(where + "/b", "bound out of range");
  const Json& nodes = detail::require(j, "nodes", where);
  if (!nodes.is_array()) throw MalformedInput(where + "/nodes", "array expected");
  NormalTree<Arity> t(d, b);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    std::string at = where + "/nodes/" + std::to_string(k);
    const Json& e = nodes[k];
    if (!e.is_array() || e.size() != Arity + 1) throw MalformedInput(at, "node of " + std::to_string(Arity + 1) + " entries expected");
    typename NormalTree<Arity>::Coords u;
    for (int c = 0; c < Arity; ++c) {
      const Json& bits = e[static_cast<std::size_t>(c)];
      if (!bits.is_string()) throw MalformedInput(at + "/" + std::to_string(c), "bit string expected");
      try {
        u[static_cast<std::size_t>(c)] = bits_from_string(bits.get<std::string>());
      } catch (const MalformedInput& err) {
        throw MalformedInput(at + "/" + std::to_string(c), err.what());
      }
    }
    const Json& sj = e[Arity];
    if (!sj.is_array()) throw MalformedInput(at + "/" + std::to_string(Arity), "integer array expected");
    Seq s;
    for (std::size_t i = 0; i < sj.size(); ++i) {
      int x = detail::require_int(sj[i], at + "/" + std::to_string(Arity) + "/" + std::to_string(i));
      if (x < 0 || x >= b) throw MalformedInput(at + "/" + std::to_string(Arity) + "/" + std::to_string(i), "entry outside 0..b-1");
      s.push_back(x);
    }
    for (const auto& uc : u)
      if (uc.size() != s.size()) throw MalformedInput(at, "coordinates of unequal length");
    if (s.size() > static_cast<std::size_t>(d)) throw MalformedInput(at, "node deeper than d");
    t.insert(u, s);
  }
  if (auto why = t.validate()) throw MalformedInput(where + "/nodes", *why);
  return t;
}

inline FiniteNormalTree tree_from_json(const Json& j, const std::string& where = "") { return normal_tree_from_json<1>(j, where); }
inline FiniteNormalTree3 tree3_from_json(const Json& j, const std::string& where = "") { return normal_tree_from_json<2>(j, where); }

template <int Arity>
std::string tree_hash(const NormalTree<Arity>& t) {
  return fnv1a_hex(to_json(t).dump());
}

// Witness maps print as [[s, f(s)], ...] in length-lex order of s.
inline Json lipschitz_to_json(const LipschitzMap& f) {
  std::vector<std::pair<Seq, Seq>> rows(f.begin(), f.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
  });
  Json out = Json::array();
  for (const auto& [x, y] : rows) out.push_back(Json::array({x, y}));
  return out;
}

inline LipschitzMap lipschitz_from_json(const Json& j, const std::string& where = "") {
  if (!j.is_array()) throw MalformedInput(where, "array of [s, f(s)] pairs expected");
  LipschitzMap f;
  for (std::size_t k = 0; k < j.size(); ++k) {
    std::string at = where + "/" + std::to_string(k);
    const Json& row = j[k];
    if (!row.is_array() || row.size() != 2 || !row[0].is_array() || !row[1].is_array()) throw MalformedInput(at, "[s, f(s)] expected");
    Seq x, y;
    for (const auto& v : row[0]) x.push_back(detail::require_int(v, at + "/0"));
    for (const auto& v : row[1]) y.push_back(detail::require_int(v, at + "/1"));
    f[x] = y;
  }
  return f;
}

}  // namespace forge
