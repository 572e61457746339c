#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forge/graph/enumerate.hpp"
#include "forge/harness/relations.hpp"

namespace forge {

// Unset fields take the suite's own default. `corpus` holds instance lines
// read from a JSONL file (manifest lines already dropped).
struct SuiteParams {
  std::optional<int> depth;
  std::optional<int> branch;
  std::optional<std::uint64_t> samples;
  std::optional<int> vertices;
  std::uint64_t seed = 7;
  std::optional<std::vector<Json>> corpus;
  Budget budget = default_budget();
};

// wall_seconds stays out of the JSON form: reports are compared byte for
// byte across runs.
struct SuiteReport {
  std::string suite;
  Json params = Json::object();
  std::uint64_t instances = 0;
  std::uint64_t pass = 0;
  std::uint64_t fail = 0;
  std::vector<Certificate> violations;
  std::uint64_t violations_dropped = 0;  // beyond the stored cap
  Json diagnostics = Json::object();
  double wall_seconds = 0;

  bool ok() const { return fail == 0; }
};

inline Json to_json(const SuiteReport& r) {
  Json v = Json::array();
  for (const auto& c : r.violations) v.push_back(to_json(c));
  return Json{{"suite", r.suite},
              {"params", r.params},
              {"instances", r.instances},
              {"pass", r.pass},
              {"fail", r.fail},
              {"violations", v},
              {"violations_dropped", r.violations_dropped},
              {"diagnostics", r.diagnostics},
              {"version", kToolVersion},
              {"conventions", convention_block()}};
}

namespace detail {

inline constexpr std::size_t kStoredViolations = 1000;

class Tally {
 public:
  explicit Tally(SuiteReport& r) : r_(r) {}

  // Counts one instance; on failure builds its certificate lazily.
  template <typename MakeCert>
  void record(bool ok, MakeCert&& make) {
    ++r_.instances;
    if (ok) {
      ++r_.pass;
      return;
    }
    ++r_.fail;
    if (r_.violations.size() < kStoredViolations)
      r_.violations.push_back(make());
    else
      ++r_.violations_dropped;
  }

  // Counts one instance by running the named check on it.
  void check(const std::string& name, const Json& lhs, const Json& rhs = Json(), const Json& flags = Json::object()) {
    auto c = observe(name, lhs, rhs, flags);
    record(c.holds, [&] { return c; });
  }

 private:
  SuiteReport& r_;
};

inline std::vector<FiniteNormalTree> tree_corpus(const SuiteParams& p, int d, int b) {
  if (!p.corpus) return enumerate_trees(d, b, p.budget);
  std::vector<FiniteNormalTree> out;
  for (std::size_t k = 0; k < p.corpus->size(); ++k) out.push_back(tree_from_json((*p.corpus)[k], "/corpus/" + std::to_string(k)));
  return out;
}

inline std::vector<Graph> graph_corpus(const SuiteParams& p, int max_n, int min_n = 1) {
  std::vector<Graph> out;
  if (p.corpus) {
    for (std::size_t k = 0; k < p.corpus->size(); ++k) out.push_back(graph_from_json((*p.corpus)[k], "/corpus/" + std::to_string(k)));
    return out;
  }
  for (auto& g : graphs_up_to_iso_upto(max_n))
    if (g.n() >= min_n) out.push_back(std::move(g));
  return out;
}

// ---- normal-form

// Reflexive, antisymmetric triple trees: diagonal tuples carry every s and
// off-diagonal tuples never carry 0^k. Transitivity is left to the checks.
inline TupleFilter<2> reflexive_antisymmetric(int b) {
  return [b](const std::array<Seq, 2>& uv, int k, std::uint64_t mask) {
    if (uv[0] == uv[1]) return mask == (std::uint64_t{1} << ipow(static_cast<std::uint64_t>(b), static_cast<unsigned>(k))) - 1;
    return !(mask & 1);
  };
}

inline void suite_normal_form(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(2), b = p.branch.value_or(2);
  const std::uint64_t samples = p.samples.value_or(100);
  r.params = {{"depth", d}, {"branch", b}, {"samples", samples}, {"seed", p.seed}};
  Tally tally(r);
  std::uint64_t corpus = 0, normal = 0;
  auto one = [&](const FiniteNormalTree3& t) {
    ++corpus;
    auto fast = check_normal_form(t);
    normal += fast.all();
    tally.record(fast == normal_form_by_definition(t), [&] { return observe("normal-form", to_json(t)); });
  };
  if (p.corpus) {
    for (std::size_t k = 0; k < p.corpus->size(); ++k) one(tree3_from_json((*p.corpus)[k], "/corpus/" + std::to_string(k)));
  } else {
    TreeEnumerator<2> en(d, b, reflexive_antisymmetric(b));
    const auto count = en.count();
    p.budget.check_instances(static_cast<std::size_t>(count), "normal-form corpus");
    en.for_each(one);
  }
  // Random trees against the triple-loop oracle; half are pushed towards
  // reflexivity so the other two conditions get exercised.
  std::mt19937_64 rng(p.seed);
  std::uint64_t random_normal = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    auto t = reference::random_tree<2>(d, b, k % 2 ? 0.1 : 0.4, rng);
    if (k % 2) {
      for (int lv = 0; lv <= d; ++lv)
        for (const auto& u : sequences_of_length(static_cast<std::size_t>(lv), 2))
          for (const auto& s : sequences_of_length(static_cast<std::size_t>(lv), b)) t.insert(u, u, s);
    }
    auto fast = check_normal_form(t);
    random_normal += fast.all();
    tally.record(fast == reference::naive_normal_form(t), [&] { return observe("normal-form", to_json(t), Json(), {{"reference", "naive"}}); });
  }
  r.diagnostics = {{"corpus", corpus}, {"corpus_normal", normal}, {"random", samples}, {"random_normal", random_normal}};
}

// ---- le-max-order-axioms

// Witnesses as rank vectors over {0..b-1}^{<=d}: r -> f(r), -1 off the
// projection. Composition and re-validation stay in rank space; a thinned
// sample is also re-validated as explicit maps.
class RankSpace {
 public:
  RankSpace(int d, int b) : b_(b) {
    auto seqs = sequences_up_to(static_cast<std::size_t>(d), b);
    for (const auto& s : seqs) {
      level_.push_back(static_cast<int>(s.size()));
      parent_.push_back(s.empty() ? -1 : static_cast<int>(length_lex_rank(prefix(s, s.size() - 1), static_cast<std::uint64_t>(b))));
    }
  }

  std::size_t size() const { return level_.size(); }

  // Length- and prefix-preserving on its domain, root to root.
  bool lipschitz(const std::vector<std::int64_t>& h) const {
    if (h.empty() || h[0] != 0) return false;
    for (std::size_t r = 1; r < h.size(); ++r) {
      if (h[r] < 0) continue;
      const auto img = static_cast<std::size_t>(h[r]);
      const auto par = static_cast<std::size_t>(parent_[r]);
      if (level_[img] != level_[r] || h[par] < 0 || parent_[img] != h[par]) return false;
    }
    return true;
  }

 private:
  int b_;
  std::vector<int> level_, parent_;
};

inline void suite_le_max_order_axioms(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(2), b = p.branch.value_or(2);
  auto corpus = tree_corpus(p, d, b);
  r.params = {{"depth", d}, {"branch", b}, {"corpus", corpus.size()}};
  for (const auto& t : corpus)
    if (t.depth() != d || t.bound() != b) throw MalformedInput("/corpus", "trees must share the suite's depth and bound");
  Tally tally(r);
  // Reflexivity with explicit witnesses.
  for (const auto& t : corpus) {
    auto f = le_max(t, t);
    tally.record(f && is_valid_witness(t, t, *f), [&] { return observe("le-max-reflexive", to_json(t)); });
  }
  // Every pair once; witnesses interned by their rank vector.
  const std::size_t n = corpus.size();
  std::vector<TreeProfile> prof;
  for (const auto& t : corpus) prof.emplace_back(t);
  std::map<std::vector<std::int64_t>, std::uint32_t> ids;
  std::vector<std::vector<std::int64_t>> witnesses;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> row(n);  // (target, witness id)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (auto f = detail::le_max_ranks(prof[i], prof[j])) {
        auto [it, fresh] = ids.try_emplace(*f, static_cast<std::uint32_t>(witnesses.size()));
        if (fresh) witnesses.push_back(*f);
        row[i].emplace_back(static_cast<std::uint32_t>(j), it->second);
      }
  RankSpace space(d, b);
  const std::size_t m = space.size();
  // composite[f][g] = id of g o f, or -1 when it leaves g's domain.
  std::vector<std::int64_t> composite(witnesses.size() * witnesses.size(), -2);
  std::vector<char> lipschitz;
  auto compose_ids = [&](std::uint32_t f, std::uint32_t g) -> std::int64_t {
    std::int64_t& slot = composite[f * witnesses.size() + g];
    if (slot != -2) return slot;
    std::vector<std::int64_t> h(m, -1);
    for (std::size_t x = 0; x < m; ++x) {
      const auto y = witnesses[f][x];
      if (y < 0) continue;
      h[x] = witnesses[g][static_cast<std::size_t>(y)];
      if (h[x] < 0) return slot = -1;
    }
    auto [it, fresh] = ids.try_emplace(h, static_cast<std::uint32_t>(witnesses.size()));
    if (fresh) {
      witnesses.push_back(h);
      std::vector<std::int64_t> grown(witnesses.size() * witnesses.size(), -2);
      const std::size_t old = witnesses.size() - 1;
      for (std::size_t a = 0; a < old; ++a)
        for (std::size_t c = 0; c < old; ++c) grown[a * witnesses.size() + c] = composite[a * old + c];
      composite.swap(grown);
    }
    composite[f * witnesses.size() + g] = it->second;
    return it->second;
  };
  auto is_lipschitz = [&](std::int64_t h) {
    if (lipschitz.size() < witnesses.size()) lipschitz.resize(witnesses.size(), -1);
    char& v = lipschitz[static_cast<std::size_t>(h)];
    if (v < 0) v = space.lipschitz(witnesses[static_cast<std::size_t>(h)]);
    return v == 1;
  };
  std::uint64_t triples = 0, map_checks = 0, pairs = 0;
  const std::uint64_t thin = p.samples.value_or(1u << 16);
  for (std::size_t i = 0; i < n; ++i) {
    pairs += row[i].size();
    for (auto [j, f] : row[i])
      for (auto [k, g] : row[j]) {
        ++triples;
        const std::int64_t h = compose_ids(f, g);
        bool ok = h >= 0 && is_lipschitz(h);
        if (ok) {
          const auto& hv = witnesses[static_cast<std::size_t>(h)];
          for (std::size_t x = 0; x < m && ok; ++x) {
            const auto mask = prof[i].mask(x);
            if (mask == 0) continue;
            ok = hv[x] >= 0 && (mask & ~prof[k].mask(static_cast<std::size_t>(hv[x]))) == 0;
          }
        }
        if (ok && triples % thin == 0) {
          ++map_checks;
          ok = is_valid_witness(corpus[i], corpus[k], compose(*le_max(corpus[i], corpus[j]), *le_max(corpus[j], corpus[k])));
        }
        tally.record(ok, [&] {
          return observe("le-max-transitive", Json{{"a", to_json(corpus[i])}, {"b", to_json(corpus[j])}, {"c", to_json(corpus[k])}});
        });
      }
  }
  r.diagnostics = {{"reflexive_checks", n}, {"related_pairs", pairs}, {"transitive_triples", triples}, {"distinct_witnesses", ids.size()}, {"map_level_checks", map_checks}};
}

// ---- tree gadgets

inline void suite_gt_embed_bridge(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(1), b = p.branch.value_or(2);
  auto corpus = tree_corpus(p, d, b);
  r.params = {{"depth", d}, {"branch", b}, {"corpus", corpus.size()}};
  std::vector<GadgetGraph> gadgets;
  for (const auto& t : corpus) gadgets.push_back(build_gadget(t, p.budget));
  Tally tally(r);
  std::uint64_t related = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      bool order = le_max(corpus[i], corpus[j]).has_value();
      bool structured = structured_embed(gadgets[i], gadgets[j], p.budget).has_value();
      related += order;
      tally.record(order == structured, [&] { return observe("gt-embed-bridge", to_json(corpus[i]), to_json(corpus[j])); });
    }
  r.diagnostics = {{"le_max_pairs", related}};
}

inline void suite_gt_rigidity(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(1), b = p.branch.value_or(2);
  auto corpus = tree_corpus(p, d, b);
  r.params = {{"depth", d}, {"branch", b}, {"corpus", corpus.size()}};
  auto rep = verify_rigidity(corpus, p.budget);
  Tally tally(r);
  std::vector<char> bad(corpus.size(), 0);
  for (const auto& v : rep.violations) bad[v.lhs] = 1;
  for (std::size_t i = 0; i < corpus.size(); ++i) tally.record(!bad[i], [&] { return observe("gt-rigidity", to_json(corpus[i])); });
}

inline void suite_gt_iso_equality(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(1), b = p.branch.value_or(2);
  auto corpus = tree_corpus(p, d, b);
  r.params = {{"depth", d}, {"branch", b}, {"corpus", corpus.size()}};
  auto rep = verify_iso_equality(corpus, p.budget);
  std::set<std::pair<std::size_t, std::size_t>> bad;
  for (const auto& v : rep.violations) bad.emplace(v.lhs, v.rhs);
  Tally tally(r);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j)
      tally.record(!bad.count({i, j}), [&] { return observe("gt-iso-equality", to_json(corpus[i]), to_json(corpus[j])); });
}

// ---- epi gadgets

inline void suite_epi_iso_bridge(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(1), b = p.branch.value_or(2), nmax = p.vertices.value_or(4);
  auto corpus = graph_corpus(p, nmax);
  r.params = {{"depth", d}, {"branch", b}, {"vertices", nmax}, {"corpus", corpus.size()}};
  const Json flags{{"depth", d}, {"branch", b}};
  auto rep = verify_iso_bridge(corpus, d, b, p.budget);
  std::set<std::pair<std::size_t, std::size_t>> bad(rep.violations.begin(), rep.violations.end());
  Tally tally(r);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j)
      tally.record(!bad.count({i, j}), [&] { return observe("epi-iso-bridge", to_json(corpus[i]), to_json(corpus[j]), flags); });
  // Automorphism count of G* for rigid G against the product formula.
  std::uint64_t rigid = 0;
  for (const auto& g : corpus) {
    if (g.n() > 7 || !is_rigid_small(g)) continue;
    ++rigid;
    auto e = build_epi_gadget(g, d, b, p.budget);
    tally.record(automorphisms(e.graph, p.budget).order == aut_product_formula(e), [&] { return observe("epi-aut-formula", to_json(g), Json(), flags); });
  }
  r.diagnostics = {{"iso_pairs", rep.instances}, {"iso_violations", rep.violations.size()}, {"rigid_graphs", rigid}};
}

inline void suite_epi_extension(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(1), b = p.branch.value_or(2), nmax = p.vertices.value_or(4);
  const int len = static_cast<int>(p.samples.value_or(3));
  auto corpus = graph_corpus(p, nmax);
  r.params = {{"depth", d}, {"branch", b}, {"vertices", nmax}, {"max_length", len}, {"corpus", corpus.size()}};
  Tally tally(r);
  std::uint64_t extendable = 0;
  for (const auto& g : corpus) {
    auto e = build_epi_gadget(g, d, b, p.budget);
    auto truth = reference::simple_extension_prefixes(e.graph, len);
    for (const auto& a : reference::injective_sequences(e.graph.n(), len)) {
      bool fast = can_extend_simple(e, a);
      extendable += fast;
      tally.record(fast == (truth.count(a) == 1), [&] {
        return observe("epi-extension", to_json(g), Json(), {{"depth", d}, {"branch", b}, {"sequence", a}});
      });
    }
  }
  r.diagnostics = {{"extendable", extendable}};
}

// ---- colored orders

inline ColoredOrdinalSum power_sum(std::vector<std::uint64_t> exps) {
  ColoredOrdinalSum s;
  for (auto e : exps) s.blocks.push_back({e, 0});
  return s;
}

inline void suite_colored_dp_oracle(const SuiteParams& p, SuiteReport& r) {
  const std::uint64_t samples = p.samples.value_or(10000);
  r.params = {{"samples", samples}, {"seed", p.seed}, {"max_blocks", 6}, {"max_exponent", 4}, {"colors", 3}};
  std::mt19937_64 rng(p.seed);
  Tally tally(r);
  std::uint64_t embedded = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    auto a = reference::random_sum(rng), b = reference::random_sum(rng);
    ColorRelation rel = k % 3 == 0 ? ColorRelation::equality() : k % 3 == 1 ? ColorRelation::geq() : reference::random_table(rng, 3);
    auto fast = embeds(a, b, rel);
    auto slow = reference::colored_embeds_naive(a, b, rel);
    embedded += fast.has_value();
    tally.record(fast == slow && (!fast || is_valid_assignment(a, b, rel, *fast)),
                 [&] { return observe("colored-dp-oracle", to_json(a), to_json(b), {{"relation", to_json(rel)}}); });
  }
  // omega^a into omega^b, and omega + 1 into omega.
  for (std::uint64_t a = 0; a <= 4; ++a)
    for (std::uint64_t b = 0; b <= 4; ++b) tally.check("colored-power", to_json(power_sum({a})), to_json(power_sum({b})));
  tally.check("colored-power", to_json(power_sum({1, 0})), to_json(power_sum({1})));
  r.diagnostics = {{"embedded_pairs", embedded}};
}

inline void suite_colored_identity(const SuiteParams& p, SuiteReport& r) {
  const int nmax = p.vertices.value_or(4);
  auto corpus = graph_corpus(p, nmax);
  std::vector<std::pair<int, int>> settings{{1, 2}, {2, 4}, {2, 7}};
  if (p.depth || p.branch) settings = {{p.depth.value_or(2), p.branch.value_or(7)}};
  Json used = Json::array();
  for (auto [d, b] : settings) used.push_back({d, b});
  r.params = {{"vertices", nmax}, {"settings", used}, {"corpus", corpus.size()}};
  Tally tally(r);
  for (auto [d, b] : settings) {
    auto rep = verify_identity_lemma(corpus, d, b);
    std::set<std::pair<std::size_t, std::size_t>> bad;
    for (const auto& v : rep.violations) bad.emplace(v.lhs, v.rhs);
    for (std::size_t i = 0; i < corpus.size(); ++i)
      for (std::size_t j = 0; j < corpus.size(); ++j)
        tally.record(!bad.count({i, j}), [&] { return observe("colored-identity", to_json(corpus[i]), to_json(corpus[j]), {{"depth", d}, {"branch", b}}); });
  }
}

// ---- metrics

inline void suite_metric_forks(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(1), b = p.branch.value_or(2);
  auto corpus = tree_corpus(p, d, b);
  r.params = {{"depth", d}, {"branch", b}, {"corpus", corpus.size()}};
  Tally tally(r);
  std::uint64_t points = 0;
  for (const auto& t : corpus) {
    auto j = to_json(t);
    auto c = observe("metric-forks", j);
    points += c.observed.at("points").get<std::uint64_t>();
    tally.record(c.holds, [&] { return c; });
    tally.check("metric-round-trip", j);
  }
  r.diagnostics = {{"branch_points", points}};
}

inline void suite_metric_bridges(const SuiteParams& p, SuiteReport& r) {
  const int d = p.depth.value_or(1), b = p.branch.value_or(2);
  auto corpus = tree_corpus(p, d, b);
  r.params = {{"depth", d}, {"branch", b}, {"corpus", corpus.size()}};
  Tally tally(r);
  std::vector<Json> js;
  std::vector<FiniteMetric> spaces;
  for (const auto& t : corpus) {
    js.push_back(to_json(t));
    spaces.push_back(build_branch_space(build_gadget(t, p.budget)).metric);
  }
  // Backward direction, reported only: isometric embedding of the
  // truncated spaces against <=max.
  std::uint64_t embed_pairs = 0, embed_without_order = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      tally.check("metric-iso-bridge", js[i], js[j]);
      tally.check("metric-forward-bridge", js[i], js[j]);
      if (iso_embed_metric(spaces[i], spaces[j], p.budget)) {
        ++embed_pairs;
        embed_without_order += !le_max(corpus[i], corpus[j]).has_value();
      }
    }
  r.diagnostics = {{"isometric_embedding_pairs", embed_pairs}, {"embedding_without_le_max", embed_without_order}};
}

inline void suite_ball_extension(const SuiteParams& p, SuiteReport& r) {
  std::vector<FiniteNormalTree> trees;
  if (p.depth || p.branch || p.corpus) {
    trees = tree_corpus(p, p.depth.value_or(1), p.branch.value_or(1));
  } else {
    trees = enumerate_trees(0, 1, p.budget);
    for (auto& t : enumerate_trees(1, 1, p.budget)) trees.push_back(std::move(t));
  }
  const std::uint64_t samples = p.samples.value_or(150);
  const int cap = p.vertices.value_or(130);
  r.params = {{"trees", trees.size()}, {"samples", samples}, {"max_elements", cap}, {"seed", p.seed}};
  std::mt19937_64 rng(p.seed);
  Tally tally(r);
  std::uint64_t skipped = 0, positives = 0;
  for (const auto& t : trees) {
    auto s = build_ball_structure(build_branch_space(build_gadget(t, p.budget)), p.budget);
    if (s.size() > cap) {
      ++skipped;
      continue;
    }
    auto cs = to_colored(s);
    auto orbit = reference::structure_orbits(cs, s.size());
    const Json tj = to_json(t);
    auto cert = [&](const std::vector<std::pair<int, int>>& h) {
      Json map = Json::array();
      for (auto [x, y] : h) map.push_back({x, y});
      return observe("ball-extension", tj, Json(), {{"map", map}});
    };
    for (int x = 0; x < s.size(); ++x)
      for (int y = 0; y < s.size(); ++y) {
        bool expect = orbit[static_cast<std::size_t>(x)] == orbit[static_cast<std::size_t>(y)];
        positives += expect;
        tally.record(can_extend_ball_auto(s, {{x, y}}) == expect, [&] { return cert({{x, y}}); });
      }
    // Maps of size 2 and 3; odd rounds draw each image from its source's
    // orbit so both answers are common.
    std::vector<std::vector<int>> members(static_cast<std::size_t>(s.size()));
    for (int z = 0; z < s.size(); ++z) members[static_cast<std::size_t>(orbit[static_cast<std::size_t>(z)])].push_back(z);
    for (std::uint64_t k = 0; k < samples; ++k) {
      std::set<int> dom, img;
      std::vector<std::pair<int, int>> h;
      const std::size_t size = 2 + k % 2;
      while (h.size() < size) {
        int x = static_cast<int>(rng() % static_cast<std::uint64_t>(s.size()));
        const auto& pool = members[static_cast<std::size_t>(orbit[static_cast<std::size_t>(x)])];
        int y = k % 2 ? pool[rng() % pool.size()] : static_cast<int>(rng() % static_cast<std::uint64_t>(s.size()));
        if (dom.count(x) || img.count(y)) continue;
        dom.insert(x);
        img.insert(y);
        h.emplace_back(x, y);
      }
      bool brute = find_structure_isomorphism(cs, cs, h, p.budget).has_value();
      positives += brute;
      tally.record(can_extend_ball_auto(s, h) == brute, [&] { return cert(h); });
    }
  }
  r.diagnostics = {{"skipped_over_cap", skipped}, {"extendable", positives}};
}

// ---- graph norms

inline void suite_norm_sandwich(const SuiteParams& p, SuiteReport& r) {
  const std::uint64_t samples = p.samples.value_or(10000);
  const int nmax = p.vertices.value_or(5);
  r.params = {{"samples", samples}, {"seed", p.seed}, {"dimensions", {2, 6}}, {"vertices", nmax}, {"certificate_dimensions", {2, 4}}};
  std::mt19937 rng(static_cast<std::mt19937::result_type>(p.seed));
  Tally tally(r);
  for (std::uint64_t k = 0; k < samples; ++k) {
    const int n = 2 + static_cast<int>(k % 5);
    auto g = reference::random_graph(n, rng);
    auto v = reference::random_vector(n, rng);
    tally.record(sandwich_check(GraphNorm(g), v), [&] { return observe("norm-sandwich", to_json(g), Json(), {{"vector", vector_to_json(v)}}); });
  }
  for (const auto& g : graph_corpus(p, nmax, 2)) tally.check("norm-pair-values", to_json(g));
  // Strongly extreme certificates at delta = epsilon / 18.
  std::uint64_t certs = 0, programs = 0;
  Rational worst = 0;
  for (const auto& g : graphs_up_to_iso_upto(4)) {
    if (g.n() < 2) continue;
    GraphNorm nm(g);
    for (int q = 0; q < g.n(); ++q)
      for (const auto& eps : {make_rational(1, 4), make_rational(1, 2), make_rational(1)}) {
        const int sign = q % 2 ? -1 : 1;
        auto c = strongly_extreme_certificate(nm, q, eps, sign);
        ++certs;
        programs += c.programs;
        worst = std::max(worst, Rational(c.max_gap / eps));
        tally.record(c.valid && c.max_gap <= c.chain_bound && revalidate(nm, c),
                     [&] { return observe("norm-extreme", to_json(g), Json(), {{"p", q}, {"epsilon", to_string(eps)}, {"sign", sign}}); });
      }
  }
  r.diagnostics = {{"certificates", certs}, {"programs", programs}, {"max_gap_over_epsilon", to_string(worst)}};
}

inline void suite_norm_li_bridge(const SuiteParams& p, SuiteReport& r) {
  const int nmax = p.vertices.value_or(5);
  auto corpus = graph_corpus(p, nmax, 2);
  r.params = {{"vertices", nmax}, {"corpus", corpus.size()}};
  Tally tally(r);
  std::uint64_t yes = 0;
  for (const auto& g : corpus)
    for (const auto& h : corpus) {
      GraphNorm a(g), b(h);
      auto w = signed_isometric_embedding(a, b, p.budget);
      bool emb = find_embedding(g, h, p.budget).has_value();
      yes += emb;
      tally.record(w.has_value() == emb && (!w || preserves_probes(a, b, *w, a.dim())), [&] { return observe("norm-li-bridge", to_json(g), to_json(h)); });
    }
  r.diagnostics = {{"embedding_pairs", yes}};
}

inline void suite_norm_extension(const SuiteParams& p, SuiteReport& r) {
  const int n = p.vertices.value_or(6);
  const std::uint64_t take = p.samples.value_or(3);
  std::vector<Graph> graphs;
  if (p.corpus) {
    graphs = graph_corpus(p, n);
  } else {
    for (const auto& g : graphs_up_to_iso(n))
      if (graphs.size() < take && is_rigid_small(g)) graphs.push_back(g);
  }
  r.params = {{"vertices", n}, {"graphs", graphs.size()}, {"max_length", 3}};
  Tally tally(r);
  std::uint64_t autos = 0;
  for (const auto& g : graphs) {
    auto s = build_norm_structure(GraphNorm(g), p.budget);
    auto group = reference::norm_automorphisms(s);
    autos += group.size();
    std::set<std::vector<int>> prefixes;
    for (const auto& h : group)
      for (std::size_t k = 0; k <= 3 && k <= h.size(); ++k) prefixes.insert(std::vector<int>(h.begin(), h.begin() + static_cast<long>(k)));
    for (const auto& seq : reference::injective_sequences(s.points(), 3))
      tally.record(can_extend_norm_auto(s, seq) == (prefixes.count(seq) == 1),
                   [&] { return observe("norm-extension", to_json(g), Json(), {{"sequence", seq}}); });
  }
  r.diagnostics = {{"automorphisms", autos}};
}

// ---- saturation

inline void suite_saturation(const SuiteParams& p, SuiteReport& r) {
  const std::uint64_t samples = p.samples.value_or(100);
  r.params = {{"samples", samples}, {"seed", p.seed}};
  std::mt19937 rng(static_cast<std::mt19937::result_type>(p.seed));
  Tally tally(r);
  std::uint64_t max_y = 0;
  int max_w = 0, max_b = 0;
  std::set<std::string> families;
  for (std::uint64_t k = 0; k < samples; ++k) {
    auto rs = random_setup(rng);
    max_y = std::max<std::uint64_t>(max_y, rs.action.group.order());
    max_w = std::max(max_w, rs.action.group.degree());
    max_b = std::max(max_b, rs.setup.b);
    families.insert(rs.family);
    tally.check("saturation", setup_to_json(rs.setup, rs.action.group), Json(), {{"corrupted", false}});
    tally.check("saturation", setup_to_json(corrupt_setup(rs.setup), rs.action.group), Json(), {{"corrupted", true}});
  }
  r.diagnostics = {{"max_group_order", max_y}, {"max_points", max_w}, {"max_instances", max_b}, {"families", families}};
}

using SuiteFn = std::function<void(const SuiteParams&, SuiteReport&)>;

inline const std::map<std::string, SuiteFn>& suite_registry() {
  static const std::map<std::string, SuiteFn> table{
      {"normal-form", suite_normal_form},
      {"le-max-order-axioms", suite_le_max_order_axioms},
      {"gt-iso-equality", suite_gt_iso_equality},
      {"gt-rigidity", suite_gt_rigidity},
      {"gt-embed-bridge", suite_gt_embed_bridge},
      {"epi-iso-bridge", suite_epi_iso_bridge},
      {"epi-extension", suite_epi_extension},
      {"colored-dp-oracle", suite_colored_dp_oracle},
      {"colored-identity", suite_colored_identity},
      {"metric-forks", suite_metric_forks},
      {"metric-bridges", suite_metric_bridges},
      {"ball-extension", suite_ball_extension},
      {"norm-sandwich", suite_norm_sandwich},
      {"norm-li-bridge", suite_norm_li_bridge},
      {"norm-extension", suite_norm_extension},
      {"saturation", suite_saturation},
  };
  return table;
}

}  // namespace detail

class UnknownSuite : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::suite_registry()) out.push_back(k);
  return out;
}

inline SuiteReport run_suite(const std::string& name, const SuiteParams& params = {}) {
  const auto& reg = detail::suite_registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw UnknownSuite("unknown suite '" + name + "'");
  SuiteReport r;
  r.suite = name;
  const auto start = std::chrono::steady_clock::now();
  it->second(params, r);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace forge
