#pragma once

#include <regex>
#include <string>
#include <vector>

#include "forge/actions/finite_actions.hpp"
#include "forge/core/hash.hpp"
#include "forge/epi/epi_gadget.hpp"
#include "forge/gadget/tree_gadget.hpp"
#include "forge/graph/json.hpp"
#include "forge/metric/metric_gadget.hpp"
#include "forge/norm/graph_norm.hpp"
#include "forge/orders/colored_orders.hpp"
#include "forge/trees/json.hpp"

// JSON for the types the harness writes and reads. Every reader reports the
// offending field as a JSON-pointer-like path.

namespace forge {

inline constexpr const char* kToolVersion = "forge 1.0.0";

// The choices the constructions leave open, frozen into every artifact.
inline Json convention_block() {
  return Json{
      {"theta", "length-lex rank of a bit string: empty, 0, 1, 00, 01, ..."},
      {"rank", "length-lex rank of s in {0..b-1}^{<omega}"},
      {"k", "Cantor enumeration k_0, k_1, ... listing every natural infinitely often"},
      {"e", "type code: arity, then equality pattern as restricted growth string, then class adjacency bits"},
      {"rational", "canonical num/den text"},
  };
}

inline std::string instance_hash(const Json& j) { return fnv1a_hex(j.dump()); }

// ---- rationals and vectors

inline Json to_json(const Rational& q) { return to_string(q); }

inline Rational rational_from_json(const Json& j, const std::string& where) {
  static const std::regex form(R"(-?[0-9]+(/[0-9]+)?)");
  if (!j.is_string()) throw MalformedInput(where, "\"num/den\" string expected");
  const auto text = j.get<std::string>();
  if (!std::regex_match(text, form)) throw MalformedInput(where, "\"num/den\" string expected");
  try {
    return parse_rational(text);
  } catch (const MalformedInput& e) {
    throw MalformedInput(where, e.what());
  }
}

inline Json vector_to_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

inline RationalVector vector_from_json(const Json& j, const std::string& where = "") {
  if (!j.is_array()) throw MalformedInput(where, "array of \"num/den\" strings expected");
  RationalVector v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(rational_from_json(j[k], where + "/" + std::to_string(k)));
  return v;
}

inline std::vector<int> int_array_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw MalformedInput(where, "integer array expected");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(detail::require_int(j[k], where + "/" + std::to_string(k)));
  return out;
}

// ---- gadgets

inline std::string seq_text(const Seq& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

// Graph JSON plus {"kinds":[[kind, "fields"]...], "provenance": tree, "provenance_hash"}.
inline Json to_json(const GadgetGraph& g) {
  Json j = to_json(g.graph);
  Json kinds = Json::array();
  for (const auto& t : g.tags) {
    std::string fields;
    switch (t.kind) {
      case GadgetKind::Tine: fields = seq_text(t.s) + ";" + std::to_string(t.i) + ";" + std::to_string(t.j); break;
      case GadgetKind::Code: fields = bits_to_string(t.u) + ";" + seq_text(t.s) + ";" + seq_text(t.x); break;
      default: fields = seq_text(t.s);
    }
    kinds.push_back({kind_name(t.kind), fields});
  }
  j["kinds"] = kinds;
  j["provenance"] = to_json(g.provenance);
  j["provenance_hash"] = tree_hash(g.provenance);
  return j;
}

// Rebuilds from the provenance tree and insists the stored graph matches.
inline GadgetGraph gadget_from_json(const Json& j, const std::string& where = "") {
  auto tree = tree_from_json(detail::require(j, "provenance", where), where + "/provenance");
  auto g = build_gadget(tree);
  if (j.contains("provenance_hash") && j.at("provenance_hash") != tree_hash(tree))
    throw MalformedInput(where + "/provenance_hash", "does not match the provenance tree");
  if (j.contains("n") && !(graph_from_json(j, where) == g.graph)) throw MalformedInput(where + "/edges", "graph is not the gadget of its provenance");
  return g;
}

inline Json to_json(const EpiGadget& e) {
  Json j = to_json(e.graph);
  Json tags = Json::array();
  for (const auto& t : e.tags) tags.push_back({epi_kind_name(t.kind), seq_text(t.t), t.i});
  Json blocks = Json::array();
  for (std::size_t k = 0; k < e.blocks.size(); ++k) blocks.push_back({seq_text(e.blocks[k]), e.block_types[k]});
  j["d"] = e.d;
  j["b"] = e.b;
  j["tags"] = tags;
  j["blocks"] = blocks;
  j["provenance"] = to_json(e.provenance);
  j["provenance_hash"] = instance_hash(to_json(e.provenance));
  return j;
}

// ---- colored orders

inline Json to_json(const ColoredOrdinalSum& s) {
  Json blocks = Json::array();
  for (const auto& b : s.blocks) blocks.push_back({b.exponent, b.color});
  return Json{{"blocks", blocks}};
}

inline ColoredOrdinalSum sum_from_json(const Json& j, const std::string& where = "") {
  const Json& blocks = detail::require(j, "blocks", where);
  if (!blocks.is_array()) throw MalformedInput(where + "/blocks", "array expected");
  ColoredOrdinalSum s;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const std::string at = where + "/blocks/" + std::to_string(k);
    const Json& b = blocks[k];
    if (!b.is_array() || b.size() != 2) throw MalformedInput(at, "[exponent, color] expected");
    int a = detail::require_int(b[0], at + "/0"), c = detail::require_int(b[1], at + "/1");
    if (a < 0 || c < 0) throw MalformedInput(at, "negative entry");
    s.blocks.push_back({static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(c)});
  }
  return s;
}

// "eq", "geq", or {"table": [[0/1...]...]}.
inline Json to_json(const ColorRelation& r) {
  switch (r.kind()) {
    case ColorRelation::Kind::Equality: return "eq";
    case ColorRelation::Kind::Geq: return "geq";
    case ColorRelation::Kind::Table: break;
  }
  Json rows = Json::array();
  for (const auto& row : r.rows()) {
    Json out = Json::array();
    for (bool x : row) out.push_back(x ? 1 : 0);
    rows.push_back(out);
  }
  return Json{{"table", rows}};
}

inline ColorRelation relation_from_json(const Json& j, const std::string& where = "") {
  if (j.is_string()) {
    if (j == "eq") return ColorRelation::equality();
    if (j == "geq") return ColorRelation::geq();
    throw MalformedInput(where, "relation must be eq, geq or a table");
  }
  const Json& rows = detail::require(j, "table", where);
  if (!rows.is_array()) throw MalformedInput(where + "/table", "array expected");
  std::vector<std::vector<bool>> out;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    auto row = int_array_from_json(rows[x], where + "/table/" + std::to_string(x));
    if (row.size() != rows.size()) throw MalformedInput(where + "/table/" + std::to_string(x), "table must be square");
    std::vector<bool> bits;
    for (int v : row) bits.push_back(v != 0);
    out.push_back(bits);
  }
  return ColorRelation::table(out);
}

inline Json assignment_to_json(const BlockAssignment& phi) { return Json{{"assignment", phi}}; }

inline BlockAssignment assignment_from_json(const Json& j, const std::string& where = "") {
  BlockAssignment phi;
  for (int x : int_array_from_json(detail::require(j, "assignment", where), where + "/assignment")) {
    if (x < 0) throw MalformedInput(where + "/assignment", "negative block index");
    phi.push_back(static_cast<std::size_t>(x));
  }
  return phi;
}

// ---- metrics

inline Json to_json(const FiniteMetric& m) {
  Json dist = Json::array();
  for (int p = 0; p < m.n(); ++p)
    for (int q = p + 1; q < m.n(); ++q) dist.push_back({p, q, to_string(m.at(p, q))});
  return Json{{"n", m.n()}, {"dist", dist}};
}

inline FiniteMetric metric_from_json(const Json& j, const std::string& where = "") {
  int n = detail::require_int(detail::require(j, "n", where), where + "/n");
  if (n < 0) throw MalformedInput(where + "/n", "negative point count");
  const Json& dist = detail::require(j, "dist", where);
  if (!dist.is_array()) throw MalformedInput(where + "/dist", "array expected");
  FiniteMetric m(n);
  std::vector<char> seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const std::string at = where + "/dist/" + std::to_string(k);
    const Json& e = dist[k];
    if (!e.is_array() || e.size() != 3) throw MalformedInput(at, "[p, q, \"num/den\"] expected");
    int p = detail::require_int(e[0], at + "/0"), q = detail::require_int(e[1], at + "/1");
    if (p < 0 || q < 0 || p >= n || q >= n || p == q) throw MalformedInput(at, "point out of range");
    m.set(p, q, rational_from_json(e[2], at + "/2"));
    seen[static_cast<std::size_t>(std::min(p, q) * n + std::max(p, q))] = 1;
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      if (!seen[static_cast<std::size_t>(p * n + q)]) throw MalformedInput(where + "/dist", "missing distance " + std::to_string(p) + "-" + std::to_string(q));
  if (auto why = m.validate()) throw MalformedInput(where + "/dist", *why);
  return m;
}

inline Json to_json(const BallStructure& s) {
  Json grid = Json::array();
  for (const auto& r : s.grid) grid.push_back(to_string(r));
  Json balls = Json::array();
  for (int e = 0; e < s.size(); ++e) {
    Json members = Json::array();
    for (std::size_t x = s.balls[static_cast<std::size_t>(e)].find_first(); x != Bits::npos; x = s.balls[static_cast<std::size_t>(e)].find_next(x))
      members.push_back(x);
    balls.push_back({{"point", s.point(e)}, {"radius", to_string(s.radius(e))}, {"members", members}});
  }
  return Json{{"grid", grid}, {"slots", s.slot_points}, {"balls", balls}};
}

// ---- graph norms

inline Json to_json(const SignedMap& h) { return Json{{"map", h.map}, {"signs", h.signs}}; }

inline SignedMap signed_map_from_json(const Json& j, const std::string& where = "") {
  SignedMap h;
  h.map = int_array_from_json(detail::require(j, "map", where), where + "/map");
  h.signs = int_array_from_json(detail::require(j, "signs", where), where + "/signs");
  if (h.map.size() != h.signs.size()) throw MalformedInput(where + "/signs", "one sign per coordinate expected");
  for (int s : h.signs)
    if (s != 1 && s != -1) throw MalformedInput(where + "/signs", "signs must be +1 or -1");
  return h;
}

inline Json to_json(const StronglyExtremeCertificate& c) {
  return Json{{"p", c.p},
              {"sign", c.sign},
              {"epsilon", to_string(c.epsilon)},
              {"delta", to_string(c.delta)},
              {"max_gap", to_string(c.max_gap)},
              {"chain_bound", to_string(c.chain_bound)},
              {"y", vector_to_json(c.y)},
              {"z", vector_to_json(c.z)},
              {"programs", c.programs},
              {"vertices_visited", c.vertices_visited},
              {"valid", c.valid}};
}

inline StronglyExtremeCertificate extreme_certificate_from_json(const Json& j, const std::string& where = "") {
  StronglyExtremeCertificate c;
  c.p = detail::require_int(detail::require(j, "p", where), where + "/p");
  c.sign = detail::require_int(detail::require(j, "sign", where), where + "/sign");
  c.epsilon = rational_from_json(detail::require(j, "epsilon", where), where + "/epsilon");
  c.delta = rational_from_json(detail::require(j, "delta", where), where + "/delta");
  c.max_gap = rational_from_json(detail::require(j, "max_gap", where), where + "/max_gap");
  c.chain_bound = rational_from_json(detail::require(j, "chain_bound", where), where + "/chain_bound");
  c.y = vector_from_json(detail::require(j, "y", where), where + "/y");
  c.z = vector_from_json(detail::require(j, "z", where), where + "/z");
  const Json& valid = detail::require(j, "valid", where);
  if (!valid.is_boolean()) throw MalformedInput(where + "/valid", "boolean expected");
  c.valid = valid.get<bool>();
  return c;
}

// ---- groups and reduction setups

inline Json to_json(const PermGroup& g) { return Json{{"degree", g.degree()}, {"gens", g.generators()}}; }

inline PermGroup group_from_json(const Json& j, const std::string& where = "") {
  int degree = detail::require_int(detail::require(j, "degree", where), where + "/degree");
  const Json& gens = detail::require(j, "gens", where);
  if (!gens.is_array()) throw MalformedInput(where + "/gens", "array expected");
  std::vector<Perm> out;
  for (std::size_t k = 0; k < gens.size(); ++k) out.push_back(int_array_from_json(gens[k], where + "/gens/" + std::to_string(k)));
  try {
    return PermGroup(degree, out);
  } catch (const MalformedInput& e) {
    throw MalformedInput(where + "/gens", e.what());
  }
}

// {"B": b, "Z": z, "W": group, "f": [...], "g": [...], "E": [class per code]}
inline Json setup_to_json(const ReductionSetup& r, const PermGroup& w) {
  return Json{{"B", r.b}, {"Z", r.z}, {"W", to_json(w)}, {"f", r.f}, {"g", r.g}, {"E", r.e_class}};
}

struct ParsedSetup {
  ReductionSetup setup;
  PermGroup group;
};

inline ParsedSetup setup_from_json(const Json& j, const std::string& where = "") {
  ReductionSetup r;
  r.b = detail::require_int(detail::require(j, "B", where), where + "/B");
  r.z = detail::require_int(detail::require(j, "Z", where), where + "/Z");
  r.f = int_array_from_json(detail::require(j, "f", where), where + "/f");
  r.g = int_array_from_json(detail::require(j, "g", where), where + "/g");
  r.e_class = int_array_from_json(detail::require(j, "E", where), where + "/E");
  return {r, group_from_json(detail::require(j, "W", where), where + "/W")};
}

}  // namespace forge
