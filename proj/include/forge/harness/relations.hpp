#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "forge/graph/search.hpp"
#include "forge/harness/codec.hpp"
#include "forge/harness/reference.hpp"
#include "forge/trees/normal_form.hpp"

// Named relations a certificate can refer to. Decision relations carry a
// witness that is checked directly; check relations record what a suite
// observed on one instance and are re-validated by recomputing it.

namespace forge {

struct Certificate {
  std::string relation;
  Json lhs;
  Json rhs;    // null for one-instance checks
  Json flags;  // relation parameters, an object
  bool holds = false;
  Json witness;   // null when none
  Json observed;  // check relations only
};

namespace detail {

inline Json flag(const Json& flags, const std::string& key) {
  if (!flags.is_object() || !flags.contains(key)) throw MalformedInput("/flags/" + key, "missing field");
  return flags.at(key);
}

inline int int_flag(const Json& flags, const std::string& key) { return require_int(flag(flags, key), "/flags/" + key); }

inline Json report_json(const NormalFormReport& r) { return Json{{"reflexive", r.reflexive}, {"transitive", r.transitive}, {"antisymmetric", r.antisymmetric}}; }

inline std::vector<std::pair<int, int>> pairs_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw MalformedInput(where, "array of pairs expected");
  std::vector<std::pair<int, int>> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    auto p = int_array_from_json(j[k], where + "/" + std::to_string(k));
    if (p.size() != 2) throw MalformedInput(where + "/" + std::to_string(k), "pair expected");
    out.emplace_back(p[0], p[1]);
  }
  return out;
}

// ---- decision relations: evaluate to (holds, witness); check a witness.

struct DecisionRelation {
  std::function<std::pair<bool, Json>(const Json&, const Json&, const Json&)> evaluate;
  std::function<bool(const Json&, const Json&, const Json&, const Json&)> check;
};

inline Json map_or_null(const std::optional<VertexMap>& m) { return m ? to_json(*m) : Json(); }

inline const std::map<std::string, DecisionRelation>& decision_relations() {
  static const std::map<std::string, DecisionRelation> table = [] {
    std::map<std::string, DecisionRelation> t;
    t["le-max"] = {[](const Json& a, const Json& b, const Json&) {
                     auto s = tree_from_json(a, "/lhs"), u = tree_from_json(b, "/rhs");
                     if (s.depth() != u.depth()) throw PreconditionError("le-max compares trees of equal depth");
                     auto f = le_max(s, u);
                     return std::make_pair(f.has_value(), f ? lipschitz_to_json(*f) : Json());
                   },
                   [](const Json& a, const Json& b, const Json&, const Json& w) {
                     return is_valid_witness(tree_from_json(a, "/lhs"), tree_from_json(b, "/rhs"), lipschitz_from_json(w, "/witness"));
                   }};
    t["embed"] = {[](const Json& a, const Json& b, const Json&) {
                    auto m = find_embedding(graph_from_json(a, "/lhs"), graph_from_json(b, "/rhs"));
                    return std::make_pair(m.has_value(), map_or_null(m));
                  },
                  [](const Json& a, const Json& b, const Json&, const Json& w) {
                    return is_embedding(graph_from_json(a, "/lhs"), graph_from_json(b, "/rhs"), vertex_map_from_json(w, "/witness"));
                  }};
    t["iso"] = {[](const Json& a, const Json& b, const Json&) {
                  auto m = find_isomorphism(graph_from_json(a, "/lhs"), graph_from_json(b, "/rhs"));
                  return std::make_pair(m.has_value(), map_or_null(m));
                },
                [](const Json& a, const Json& b, const Json&, const Json& w) {
                  auto g = graph_from_json(a, "/lhs"), h = graph_from_json(b, "/rhs");
                  auto m = vertex_map_from_json(w, "/witness");
                  return g.n() == h.n() && is_embedding(g, h, m) && is_isomorphism(g, h, m);
                }};
    // A epi B: gamma maps B onto A, edges to edges.
    t["epi"] = {[](const Json& a, const Json& b, const Json&) {
                  auto m = find_epimorphism(graph_from_json(a, "/lhs"), graph_from_json(b, "/rhs"));
                  return std::make_pair(m.has_value(), map_or_null(m));
                },
                [](const Json& a, const Json& b, const Json&, const Json& w) {
                  return is_epimorphism(graph_from_json(a, "/lhs"), graph_from_json(b, "/rhs"), vertex_map_from_json(w, "/witness"));
                }};
    t["colored-embed"] = {[](const Json& a, const Json& b, const Json& f) {
                            auto phi = embeds(sum_from_json(a, "/lhs"), sum_from_json(b, "/rhs"), relation_from_json(flag(f, "relation"), "/flags/relation"));
                            return std::make_pair(phi.has_value(), phi ? assignment_to_json(*phi) : Json());
                          },
                          [](const Json& a, const Json& b, const Json& f, const Json& w) {
                            return is_valid_assignment(sum_from_json(a, "/lhs"), sum_from_json(b, "/rhs"),
                                                       relation_from_json(flag(f, "relation"), "/flags/relation"), assignment_from_json(w, "/witness"));
                          }};
    // The witness is the shared normal form.
    t["colored-iso"] = {[](const Json& a, const Json& b, const Json&) {
                          auto x = normal_form(sum_from_json(a, "/lhs")), y = normal_form(sum_from_json(b, "/rhs"));
                          return std::make_pair(x == y, x == y ? to_json(x) : Json());
                        },
                        [](const Json& a, const Json& b, const Json&, const Json& w) {
                          auto nf = sum_from_json(w, "/witness");
                          return normal_form(sum_from_json(a, "/lhs")) == nf && normal_form(sum_from_json(b, "/rhs")) == nf;
                        }};
    t["iso-embed-metric"] = {[](const Json& a, const Json& b, const Json&) {
                               auto m = iso_embed_metric(metric_from_json(a, "/lhs"), metric_from_json(b, "/rhs"));
                               return std::make_pair(m.has_value(), map_or_null(m));
                             },
                             [](const Json& a, const Json& b, const Json&, const Json& w) {
                               return is_isometric_embedding(metric_from_json(a, "/lhs"), metric_from_json(b, "/rhs"), vertex_map_from_json(w, "/witness"));
                             }};
    t["signed-li"] = {[](const Json& a, const Json& b, const Json&) {
                        auto h = signed_isometric_embedding(GraphNorm(graph_from_json(a, "/lhs")), GraphNorm(graph_from_json(b, "/rhs")));
                        return std::make_pair(h.has_value(), h ? to_json(*h) : Json());
                      },
                      [](const Json& a, const Json& b, const Json&, const Json& w) {
                        GraphNorm x(graph_from_json(a, "/lhs")), y(graph_from_json(b, "/rhs"));
                        auto h = signed_map_from_json(w, "/witness");
                        if (static_cast<int>(h.map.size()) != x.dim()) return false;
                        std::set<int> seen;
                        for (int p : h.map)
                          if (p < 0 || p >= y.dim() || !seen.insert(p).second) return false;
                        return preserves_probes(x, y, h, x.dim());
                      }};
    return t;
  }();
  return table;
}

// ---- check relations: recompute what a suite observed on one instance.
// Every observer returns an object with an "ok" member.

using Observer = std::function<Json(const Json&, const Json&, const Json&)>;

inline const std::map<std::string, Observer>& check_relations() {
  static const std::map<std::string, Observer> table = [] {
    std::map<std::string, Observer> t;
    t["normal-form"] = [](const Json& a, const Json&, const Json& f) {
      auto tree = tree3_from_json(a, "/lhs");
      auto fast = check_normal_form(tree);
      // "definition" for corpus members, the triple-loop oracle for random trees
      auto slow = f.value("reference", "definition") == "naive" ? reference::naive_normal_form(tree) : normal_form_by_definition(tree);
      return Json{{"ok", fast == slow}, {"checker", report_json(fast)}, {"reference", report_json(slow)}};
    };
    t["le-max-reflexive"] = [](const Json& a, const Json&, const Json&) {
      auto tree = tree_from_json(a, "/lhs");
      auto f = le_max(tree, tree);
      bool valid = f && is_valid_witness(tree, tree, *f);
      return Json{{"ok", valid}, {"holds", f.has_value()}, {"witness_valid", valid}};
    };
    // lhs = {"a","b","c"}: both links hold and their composite must re-validate.
    t["le-max-transitive"] = [](const Json& a, const Json&, const Json&) {
      auto x = tree_from_json(flag(a, "a"), "/lhs/a"), y = tree_from_json(flag(a, "b"), "/lhs/b"), z = tree_from_json(flag(a, "c"), "/lhs/c");
      auto f = le_max(x, y), g = le_max(y, z);
      bool valid = f && g && is_valid_witness(x, z, compose(*f, *g));
      return Json{{"ok", !f || !g || valid}, {"ab", f.has_value()}, {"bc", g.has_value()}, {"composite_valid", valid}};
    };
    t["gt-embed-bridge"] = [](const Json& a, const Json& b, const Json&) {
      auto s = tree_from_json(a, "/lhs"), u = tree_from_json(b, "/rhs");
      bool structured = structured_embed(build_gadget(s), build_gadget(u)).has_value();
      bool order = le_max(s, u).has_value();
      return Json{{"ok", structured == order}, {"structured", structured}, {"le_max", order}};
    };
    t["gt-rigidity"] = [](const Json& a, const Json&, const Json&) {
      auto order = automorphisms(build_gadget(tree_from_json(a, "/lhs")).graph).order;
      return Json{{"ok", order == 1}, {"order", order}};
    };
    t["gt-iso-equality"] = [](const Json& a, const Json& b, const Json&) {
      auto s = tree_from_json(a, "/lhs"), u = tree_from_json(b, "/rhs");
      bool iso = find_isomorphism(build_gadget(s).graph, build_gadget(u).graph).has_value();
      return Json{{"ok", iso == (s == u)}, {"isomorphic", iso}, {"equal", s == u}};
    };
    t["epi-iso-bridge"] = [](const Json& a, const Json& b, const Json& f) {
      auto g = graph_from_json(a, "/lhs"), h = graph_from_json(b, "/rhs");
      const int d = int_flag(f, "depth"), br = int_flag(f, "branch");
      bool base = g.n() == h.n() && find_isomorphism(g, h).has_value();
      auto x = build_epi_gadget(g, d, br).graph, y = build_epi_gadget(h, d, br).graph;
      bool lifted = x == y || (x.n() == y.n() && find_isomorphism(x, y).has_value());
      return Json{{"ok", base == lifted}, {"graphs_isomorphic", base}, {"gadgets_isomorphic", lifted}};
    };
    t["epi-aut-formula"] = [](const Json& a, const Json&, const Json& f) {
      auto e = build_epi_gadget(graph_from_json(a, "/lhs"), int_flag(f, "depth"), int_flag(f, "branch"));
      auto order = automorphisms(e.graph).order;
      auto formula = aut_product_formula(e);
      return Json{{"ok", order == formula}, {"order", order}, {"formula", formula}, {"simple_order", simple_automorphism_group(e).order}};
    };
    t["epi-extension"] = [](const Json& a, const Json&, const Json& f) {
      auto e = build_epi_gadget(graph_from_json(a, "/lhs"), int_flag(f, "depth"), int_flag(f, "branch"));
      auto seq = int_array_from_json(flag(f, "sequence"), "/flags/sequence");
      bool fast = can_extend_simple(e, seq);
      bool brute = reference::simple_extension_prefixes(e.graph, static_cast<int>(seq.size())).count(seq) == 1;
      return Json{{"ok", fast == brute}, {"criterion", fast}, {"brute", brute}};
    };
    t["colored-dp-oracle"] = [](const Json& a, const Json& b, const Json& f) {
      auto x = sum_from_json(a, "/lhs"), y = sum_from_json(b, "/rhs");
      auto r = relation_from_json(flag(f, "relation"), "/flags/relation");
      auto fast = embeds(x, y, r), slow = reference::colored_embeds_naive(x, y, r);
      bool ok = fast == slow && (!fast || is_valid_assignment(x, y, r, *fast));
      return Json{{"ok", ok}, {"dp", fast ? Json(*fast) : Json()}, {"naive", slow ? Json(*slow) : Json()}};
    };
    t["colored-power"] = [](const Json& a, const Json& b, const Json&) {
      auto x = sum_from_json(a, "/lhs"), y = sum_from_json(b, "/rhs");
      bool holds = embeds(x, y, ColorRelation::equality()).has_value();
      // single blocks compare by exponent; omega+1 never fits in omega
      bool expect = x.size() == 1 && y.size() == 1 ? x.blocks[0].exponent <= y.blocks[0].exponent : false;
      return Json{{"ok", holds == expect}, {"embeds", holds}, {"expected", expect}};
    };
    t["colored-identity"] = [](const Json& a, const Json& b, const Json& f) {
      auto g = graph_from_json(a, "/lhs"), h = graph_from_json(b, "/rhs");
      const int d = int_flag(f, "depth"), br = int_flag(f, "branch");
      auto rep = verify_identity_lemma({g, h}, d, br);
      bool iso = iso_colored(build_LG(g, d, br), build_LG(h, d, br));
      return Json{{"ok", rep.ok()}, {"iso", iso}, {"equal", build_LG(g, d, br) == build_LG(h, d, br)}, {"profile", lg_profile(g, d, br) == lg_profile(h, d, br)}};
    };
    t["metric-forks"] = [](const Json& a, const Json&, const Json&) {
      auto g = build_gadget(tree_from_json(a, "/lhs"));
      auto sp = build_branch_space(g);
      // Point distances against 2^{-(shared root-path vertices - 1)} read off the graph.
      auto dist = distance_matrix(g.graph);
      const int root = g.seq_vertex({});
      auto at = [&](int x, int y) { return dist[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; };
      std::size_t distance_errors = 0, fork_errors = 0;
      for (int x = 0; x < sp.metric.n(); ++x)
        for (int y = x + 1; y < sp.metric.n(); ++y) {
          int lx = sp.points[static_cast<std::size_t>(x)].leaf, ly = sp.points[static_cast<std::size_t>(y)].leaf;
          int shared = (at(root, lx) + at(root, ly) - at(lx, ly)) / 2 + 1;
          distance_errors += sp.metric.at(x, y) != inverse_power_of_two(static_cast<unsigned>(shared - 1));
        }
      for (const auto& fk : sp.forks) {
        unsigned e = fk.kind == BranchKind::Tine ? static_cast<unsigned>(2 * fk.s.size() + 2) : static_cast<unsigned>(2 * fk.s.size() + 2 * theta(fk.u) + 3);
        for (std::size_t i = 0; i < fk.points.size(); ++i)
          for (std::size_t j = i + 1; j < fk.points.size(); ++j) fork_errors += sp.metric.at(fk.points[i], fk.points[j]) != inverse_power_of_two(e);
      }
      bool ultra = sp.metric.is_ultrametric();
      return Json{{"ok", ultra && distance_errors == 0 && fork_errors == 0},
                  {"points", sp.metric.n()},
                  {"forks", sp.forks.size()},
                  {"ultrametric", ultra},
                  {"distance_errors", distance_errors},
                  {"fork_errors", fork_errors}};
    };
    t["metric-round-trip"] = [](const Json& a, const Json&, const Json&) {
      auto g = build_gadget(tree_from_json(a, "/lhs")).graph;
      bool ok = recover_graph(build_discrete(g)) == g;
      return Json{{"ok", ok}, {"vertices", g.n()}};
    };
    t["metric-iso-bridge"] = [](const Json& a, const Json& b, const Json&) {
      auto s = tree_from_json(a, "/lhs"), u = tree_from_json(b, "/rhs");
      bool iso = iso_metric(build_branch_space(build_gadget(s)).metric, build_branch_space(build_gadget(u)).metric).has_value();
      return Json{{"ok", iso == (s == u)}, {"isometric", iso}, {"equal", s == u}};
    };
    // Forward direction of the embedding bridge: a <=max witness yields an
    // isometric embedding of branch spaces.
    t["metric-forward-bridge"] = [](const Json& a, const Json& b, const Json&) {
      auto s = tree_from_json(a, "/lhs"), u = tree_from_json(b, "/rhs");
      auto f0 = le_max(s, u);
      if (!f0) return Json{{"ok", true}, {"le_max", false}};
      auto src = build_branch_space(build_gadget(s));
      auto e = branch_embedding_from_witness(s, u, *f0);
      bool iso = is_isometric_embedding(src.metric, e.target.metric, e.map);
      return Json{{"ok", iso}, {"le_max", true}, {"isometric", iso}};
    };
    // flags.map = [[x, y], ...]; brute force is a pinned automorphism search.
    t["ball-extension"] = [](const Json& a, const Json&, const Json& f) {
      auto s = build_ball_structure(build_branch_space(build_gadget(tree_from_json(a, "/lhs"))));
      auto h = pairs_from_json(flag(f, "map"), "/flags/map");
      bool fast = can_extend_ball_auto(s, h);
      bool brute = find_structure_isomorphism(to_colored(s), to_colored(s), h).has_value();
      return Json{{"ok", fast == brute}, {"criterion", fast}, {"brute", brute}};
    };
    t["norm-sandwich"] = [](const Json& a, const Json&, const Json& f) {
      GraphNorm nm(graph_from_json(a, "/lhs"));
      auto v = vector_from_json(flag(f, "vector"), "/flags/vector");
      auto value = norm(nm, v);
      return Json{{"ok", sandwich_check(nm, v)}, {"norm", to_string(value)}, {"sup", to_string(sup_norm(v))}};
    };
    t["norm-pair-values"] = [](const Json& a, const Json&, const Json&) {
      auto g = graph_from_json(a, "/lhs");
      GraphNorm nm(g);
      std::size_t errors = 0;
      for (int p = 0; p < g.n(); ++p)
        for (int q = 0; q < g.n(); ++q) {
          if (p == q) continue;
          for (int sp : {1, -1})
            for (int sq : {1, -1}) {
              RationalVector v(static_cast<std::size_t>(g.n()), Rational(0));
              v[static_cast<std::size_t>(p)] = sp;
              v[static_cast<std::size_t>(q)] = sq;
              errors += norm(nm, v) != (g.has_edge(p, q) ? make_rational(3, 2) : make_rational(4, 3));
            }
        }
      return Json{{"ok", errors == 0}, {"errors", errors}};
    };
    t["norm-extreme"] = [](const Json& a, const Json&, const Json& f) {
      GraphNorm nm(graph_from_json(a, "/lhs"));
      auto c = strongly_extreme_certificate(nm, int_flag(f, "p"), rational_from_json(flag(f, "epsilon"), "/flags/epsilon"), int_flag(f, "sign"));
      bool again = revalidate(nm, c);
      return Json{{"ok", c.valid && again && c.max_gap <= c.chain_bound}, {"certificate", to_json(c)}, {"revalidated", again}};
    };
    t["norm-li-bridge"] = [](const Json& a, const Json& b, const Json&) {
      auto g = graph_from_json(a, "/lhs"), h = graph_from_json(b, "/rhs");
      GraphNorm x(g), y(h);
      auto w = signed_isometric_embedding(x, y);
      bool emb = find_embedding(g, h).has_value();
      bool faithful = !w || preserves_probes(x, y, *w, x.dim());
      return Json{{"ok", w.has_value() == emb && faithful}, {"signed", w ? to_json(*w) : Json()}, {"embedding", emb}};
    };
    t["norm-extension"] = [](const Json& a, const Json&, const Json& f) {
      auto s = build_norm_structure(GraphNorm(graph_from_json(a, "/lhs")));
      auto seq = int_array_from_json(flag(f, "sequence"), "/flags/sequence");
      bool fast = can_extend_norm_auto(s, seq);
      bool brute = false;
      for (const auto& h : reference::norm_automorphisms(s)) brute = brute || std::equal(seq.begin(), seq.end(), h.begin());
      return Json{{"ok", fast == brute}, {"criterion", fast}, {"brute", brute}};
    };
    // lhs = setup JSON; flags.corrupted says whether the hypothesis check must fire.
    t["saturation"] = [](const Json& a, const Json&, const Json& f) {
      auto [setup, group] = setup_from_json(a, "/lhs");
      PermGroupAction act{group};
      const bool corrupted = f.value("corrupted", false);
      bool caught = false;
      try {
        saturation_by_uniqueness(setup, act, true);
      } catch (const PreconditionError&) {
        caught = true;
      }
      auto res = saturation_by_uniqueness(setup, act, false);
      Json obs{{"p", res.p}, {"direct", res.direct}, {"hypothesis_rejected", caught}, {"agrees", res.agrees()}};
      obs["ok"] = corrupted ? caught && !res.agrees() : !caught && res.agrees();
      return obs;
    };
    return t;
  }();
  return table;
}

}  // namespace detail

inline std::vector<std::string> decision_relation_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::decision_relations()) out.push_back(k);
  return out;
}

// Decides `relation` on (lhs, rhs) and packages the verdict.
inline Certificate decide(const std::string& relation, const Json& lhs, const Json& rhs, const Json& flags = Json::object()) {
  const auto& table = detail::decision_relations();
  auto it = table.find(relation);
  if (it == table.end()) throw PreconditionError("unknown relation '" + relation + "'");
  auto [holds, witness] = it->second.evaluate(lhs, rhs, flags);
  return Certificate{relation, lhs, rhs, flags, holds, witness, Json()};
}

// Runs a check relation on one instance.
inline Certificate observe(const std::string& check, const Json& lhs, const Json& rhs = Json(), const Json& flags = Json::object()) {
  const auto& table = detail::check_relations();
  auto it = table.find(check);
  if (it == table.end()) throw PreconditionError("unknown check '" + check + "'");
  Json obs = it->second(lhs, rhs, flags);
  return Certificate{check, lhs, rhs, flags, obs.at("ok").get<bool>(), Json(), obs};
}

// Witness certificates are checked against the relation directly; every
// other certificate is recomputed and must reproduce its verdict, witness
// and observations exactly.
inline bool revalidate(const Certificate& c) {
  const auto& dec = detail::decision_relations();
  if (auto it = dec.find(c.relation); it != dec.end()) {
    if (c.holds && !c.witness.is_null() && !it->second.check(c.lhs, c.rhs, c.flags, c.witness)) return false;
    auto [holds, witness] = it->second.evaluate(c.lhs, c.rhs, c.flags);
    return holds == c.holds && witness == c.witness;
  }
  const auto& chk = detail::check_relations();
  auto it = chk.find(c.relation);
  if (it == chk.end()) throw MalformedInput("/relation", "unknown relation '" + c.relation + "'");
  Json obs = it->second(c.lhs, c.rhs, c.flags);
  return obs == c.observed && obs.at("ok").get<bool>() == c.holds;
}

inline Json to_json(const Certificate& c) {
  Json j{{"relation", c.relation},
         {"lhs_hash", instance_hash(c.lhs)},
         {"rhs_hash", c.rhs.is_null() ? Json() : Json(instance_hash(c.rhs))},
         {"verdict", c.holds ? "holds" : "does-not-hold"},
         {"witness", c.witness},
         {"version", kToolVersion},
         {"conventions", convention_block()},
         {"flags", c.flags},
         {"lhs", c.lhs},
         {"rhs", c.rhs}};
  if (!c.observed.is_null()) j["observed"] = c.observed;
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  Certificate c;
  const Json& rel = detail::require(j, "relation", "");
  if (!rel.is_string()) throw MalformedInput("/relation", "string expected");
  c.relation = rel.get<std::string>();
  c.lhs = detail::require(j, "lhs", "");
  c.rhs = j.value("rhs", Json());
  c.flags = j.value("flags", Json::object());
  const Json& verdict = detail::require(j, "verdict", "");
  if (verdict != "holds" && verdict != "does-not-hold") throw MalformedInput("/verdict", "holds or does-not-hold expected");
  c.holds = verdict == "holds";
  c.witness = j.value("witness", Json());
  c.observed = j.value("observed", Json());
  if (detail::require(j, "lhs_hash", "") != instance_hash(c.lhs)) throw MalformedInput("/lhs_hash", "does not match the embedded instance");
  if (!c.rhs.is_null() && detail::require(j, "rhs_hash", "") != instance_hash(c.rhs)) throw MalformedInput("/rhs_hash", "does not match the embedded instance");
  return c;
}

}  // namespace forge
