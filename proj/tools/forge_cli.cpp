// forge: corpus enumeration, verification suites, decisions and builders.
// Exit codes: 0 holds / no violations, 1 does not hold / violations, 2 error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "forge/harness/suites.hpp"

namespace {

using forge::Json;

constexpr int kUsage = 2;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw forge::MalformedInput("", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw forge::MalformedInput("", path + ": " + e.what());
  }
}

// Instance lines of a JSONL corpus; manifest lines are skipped.
std::vector<Json> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw forge::MalformedInput("", "cannot open " + path);
  std::vector<Json> out;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw forge::MalformedInput("", path + ":" + std::to_string(no) + ": " + e.what());
    }
    if (j.is_object() && j.contains("manifest")) continue;
    out.push_back(std::move(j));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw forge::Error("cannot write " + path);
  out << text;
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

std::string manifest_line(const std::string& kind, std::size_t count, const Json& params) {
  return Json{{"manifest", {{"kind", kind}, {"count", count}, {"params", params}, {"version", forge::kToolVersion}, {"conventions", forge::convention_block()}}}}.dump() + "\n";
}

std::string jsonl(const std::string& kind, const Json& params, const std::vector<Json>& items) {
  std::string out = manifest_line(kind, items.size(), params);
  for (const auto& j : items) out += j.dump() + "\n";
  return out;
}

Json point_json(const forge::BranchPoint& p) {
  using forge::seq_text;
  Json j{{"kind", p.kind == forge::BranchKind::Tine ? "tine" : "code"}, {"s", seq_text(p.s)}, {"i", p.i}, {"leaf", p.leaf}, {"fork", p.fork}};
  if (p.kind == forge::BranchKind::Code) j["u"] = seq_text(p.u);
  return j;
}

Json branch_space_json(const forge::BranchSpace& sp) {
  Json points = Json::array(), forks = Json::array();
  for (const auto& p : sp.points) points.push_back(point_json(p));
  for (const auto& f : sp.forks) {
    Json j{{"kind", f.kind == forge::BranchKind::Tine ? "tine" : "code"}, {"s", forge::seq_text(f.s)}, {"points", f.points}};
    if (f.kind == forge::BranchKind::Code) j["u"] = forge::seq_text(f.u);
    forks.push_back(j);
  }
  return Json{{"d", sp.d}, {"b", sp.b}, {"metric", forge::to_json(sp.metric)}, {"points", points}, {"forks", forks}, {"slots", sp.slots}};
}

// Gadget JSON, or a bare tree which is turned into its gadget first.
forge::GadgetGraph gadget_input(const Json& j, const forge::Budget& budget) {
  if (j.is_object() && j.contains("provenance") && j.contains("kinds")) return forge::gadget_from_json(j);
  return forge::build_gadget(forge::tree_from_json(j), budget);
}

struct Options {
  int depth = -1, branch = -1, vertices = -1, max_vertices = -1;
  long long samples = -1;
  std::uint64_t seed = 7;
  bool labeled = false;
  std::string out, report, corpus, relation, suite, name, lhs, rhs, input;
};

int run_enumerate_trees(const Options& o) {
  const auto budget = forge::default_budget();
  std::vector<Json> items;
  for (const auto& t : forge::enumerate_trees(o.depth, o.branch, budget)) items.push_back(forge::to_json(t));
  write_text(o.out, jsonl("trees", {{"depth", o.depth}, {"branch", o.branch}}, items));
  std::cerr << items.size() << " trees\n";
  return 0;
}

int run_enumerate_graphs(const Options& o) {
  if ((o.vertices < 0) == (o.max_vertices < 0)) throw forge::PreconditionError("give exactly one of --vertices, --max-vertices");
  const int lo = o.vertices >= 0 ? o.vertices : 1, hi = o.vertices >= 0 ? o.vertices : o.max_vertices;
  forge::default_budget().check_vertices(static_cast<std::size_t>(hi), "graph enumeration");
  std::vector<Json> items;
  for (int n = lo; n <= hi; ++n)
    for (const auto& g : o.labeled ? forge::labeled_graphs(n) : forge::graphs_up_to_iso(n)) items.push_back(forge::to_json(g));
  Json params{{"labeled", o.labeled}};
  if (o.vertices >= 0) params["vertices"] = o.vertices;
  else params["max_vertices"] = o.max_vertices;
  write_text(o.out, jsonl("graphs", params, items));
  std::cerr << items.size() << " graphs\n";
  return 0;
}

int run_verify(const Options& o) {
  forge::SuiteParams p;
  if (o.depth >= 0) p.depth = o.depth;
  if (o.branch >= 0) p.branch = o.branch;
  if (o.vertices >= 0) p.vertices = o.vertices;
  if (o.samples >= 0) p.samples = static_cast<std::uint64_t>(o.samples);
  p.seed = o.seed;
  if (!o.corpus.empty()) p.corpus = read_corpus(o.corpus);
  auto r = forge::run_suite(o.suite, p);
  if (!o.report.empty()) write_text(o.report, pretty(forge::to_json(r)));
  std::cout << r.suite << ": " << r.instances << " instances, " << r.pass << " pass, " << r.fail << " fail";
  std::ostringstream secs;
  secs.precision(3);
  secs << std::fixed << r.wall_seconds;
  std::cout << " (" << secs.str() << " s)\n";
  if (!r.diagnostics.empty()) std::cout << "diagnostics: " << r.diagnostics.dump() << "\n";
  return r.ok() ? 0 : 1;
}

int run_decide(const Options& o) {
  std::string rel = o.name == "iso-embed" ? "iso-embed-metric" : o.name;
  Json flags = Json::object();
  if (!o.relation.empty()) flags["relation"] = (o.relation == "eq" || o.relation == "geq") ? Json(o.relation) : read_json(o.relation);
  else if (rel == "colored-embed") flags["relation"] = "eq";
  if (o.depth >= 0) flags["depth"] = o.depth;
  if (o.branch >= 0) flags["branch"] = o.branch;
  auto c = forge::decide(rel, read_json(o.lhs), read_json(o.rhs), flags);
  std::cout << rel << ": " << (c.holds ? "holds" : "does not hold") << "\n";
  if (!c.witness.is_null()) {
    if (o.out.empty()) std::cout << pretty(forge::to_json(c));
    else write_text(o.out, pretty(forge::to_json(c)));
  }
  return c.holds ? 0 : 1;
}

int run_revalidate(const Options& o) {
  auto c = forge::certificate_from_json(read_json(o.input));
  const bool ok = forge::revalidate(c);
  std::cout << c.relation << ": " << (ok ? "certificate valid" : "certificate INVALID") << "\n";
  return ok ? 0 : 1;
}

int run_build(const Options& o) {
  const auto budget = forge::default_budget();
  const Json in = read_json(o.input);
  const int d = o.depth >= 0 ? o.depth : 1, b = o.branch >= 0 ? o.branch : 2;
  Json out;
  if (o.name == "g-t") out = forge::to_json(forge::build_gadget(forge::tree_from_json(in), budget));
  else if (o.name == "g-star") out = forge::to_json(forge::build_epi_gadget(forge::graph_from_json(in), d, b, budget));
  else if (o.name == "lg") out = forge::to_json(forge::build_LG(forge::graph_from_json(in), d, b));
  else if (o.name == "discrete") out = forge::to_json(forge::build_discrete(forge::graph_from_json(in)));
  else if (o.name == "u-g") out = branch_space_json(forge::build_branch_space(gadget_input(in, budget)));
  else if (o.name == "balls") out = forge::to_json(forge::build_ball_structure(forge::build_branch_space(gadget_input(in, budget)), budget));
  else throw forge::PreconditionError("unknown construction '" + o.name + "' (g-t, g-star, lg, discrete, u-g, balls)");
  write_text(o.out, pretty(out));
  return 0;
}

int run_norm_eval(const Options& o) {
  forge::GraphNorm nm(forge::graph_from_json(read_json(o.lhs), "/graph"));
  auto v = forge::vector_from_json(read_json(o.rhs), "/vector");
  if (static_cast<int>(v.size()) != nm.dim()) throw forge::MalformedInput("/vector", "length must equal the vertex count");
  std::cout << forge::to_string(forge::norm(nm, v)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: finite gadget constructions and their verification suites"};
  app.require_subcommand(1);
  Options o;

  auto* et = app.add_subcommand("enumerate-trees", "write every normal tree of depth d and bound b as JSONL");
  et->add_option("--depth", o.depth)->required()->check(CLI::NonNegativeNumber);
  et->add_option("--branch", o.branch)->required()->check(CLI::PositiveNumber);
  et->add_option("--out", o.out, "output file (default stdout)");

  auto* eg = app.add_subcommand("enumerate-graphs", "write graphs as JSONL, up to isomorphism unless --labeled");
  eg->add_option("--vertices", o.vertices, "exactly this many vertices")->check(CLI::NonNegativeNumber);
  eg->add_option("--max-vertices", o.max_vertices, "1 up to this many vertices")->check(CLI::PositiveNumber);
  eg->add_flag("--labeled", o.labeled);
  eg->add_option("--out", o.out);

  auto* vf = app.add_subcommand("verify", "run a verification suite");
  std::string names;
  for (const auto& n : forge::suite_names()) names += "\n  " + n;
  vf->add_option("suite", o.suite, "suite name:" + names)->required();
  vf->add_option("--corpus", o.corpus, "JSONL corpus replacing the suite's own");
  vf->add_option("--seed", o.seed);
  vf->add_option("--report", o.report, "write the JSON report here");
  vf->add_option("--depth", o.depth)->check(CLI::NonNegativeNumber);
  vf->add_option("--branch", o.branch)->check(CLI::PositiveNumber);
  vf->add_option("--samples", o.samples)->check(CLI::NonNegativeNumber);
  vf->add_option("--vertices", o.vertices)->check(CLI::NonNegativeNumber);

  auto* dc = app.add_subcommand("decide", "decide a relation between two instances and emit a certificate");
  dc->add_option("name", o.name, "le-max, embed, iso, epi, colored-embed, colored-iso, iso-embed-metric (iso-embed), signed-li")->required();
  dc->add_option("A", o.lhs)->required();
  dc->add_option("B", o.rhs)->required();
  dc->add_option("--relation", o.relation, "colour relation: eq, geq or a table JSON file");
  dc->add_option("--depth", o.depth);
  dc->add_option("--branch", o.branch);
  dc->add_option("--out", o.out, "certificate file (default stdout)");

  auto* rv = app.add_subcommand("revalidate", "re-check a certificate file");
  rv->add_option("certificate", o.input)->required();

  auto* bd = app.add_subcommand("build", "build a construction: g-t, g-star, lg, discrete, u-g, balls");
  bd->add_option("construction", o.name)->required();
  bd->add_option("input", o.input)->required();
  bd->add_option("--depth", o.depth)->check(CLI::NonNegativeNumber);
  bd->add_option("--branch", o.branch)->check(CLI::PositiveNumber);
  bd->add_option("--out", o.out);

  auto* nm = app.add_subcommand("norm", "graph norm utilities");
  auto* ne = nm->add_subcommand("eval", "evaluate the norm of a vector");
  nm->require_subcommand(1);
  ne->add_option("graph", o.lhs)->required();
  ne->add_option("vector", o.rhs)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*et) return run_enumerate_trees(o);
    if (*eg) return run_enumerate_graphs(o);
    if (*vf) return run_verify(o);
    if (*dc) return run_decide(o);
    if (*rv) return run_revalidate(o);
    if (*bd) return run_build(o);
    if (*ne) return run_norm_eval(o);
  } catch (const forge::MalformedInput& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kUsage;
  } catch (const forge::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kUsage;
  } catch (const forge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
