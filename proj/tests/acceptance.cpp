// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any fails. Optional argument: directory for the JSON suite reports.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "forge/harness/suites.hpp"

using namespace forge;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
};

const std::vector<Criterion> kCriteria{
    {1, "normal form checker", {"normal-form"}},
    {2, "le-max order axioms", {"le-max-order-axioms"}},
    {3, "gadget embedding bridge", {"gt-embed-bridge"}},
    {4, "gadget rigidity and iso-equality", {"gt-rigidity", "gt-iso-equality"}},
    {5, "epi gadget", {"epi-iso-bridge", "epi-extension"}},
    {6, "colored orders", {"colored-dp-oracle", "colored-identity"}},
    {7, "branch spaces and ball structures", {"metric-forks", "metric-bridges", "ball-extension"}},
    {8, "graph norms", {"norm-sandwich", "norm-li-bridge", "norm-extension"}},
    {9, "saturation engine", {"saturation"}},
};

std::string brief(const SuiteReport& r) {
  return r.suite + " " + std::to_string(r.fail) + "/" + std::to_string(r.instances) + " violations";
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<std::filesystem::path> out;
  if (argc > 1) {
    out = argv[1];
    std::filesystem::create_directories(*out);
  }

  std::map<std::string, std::string> first;  // suite -> report bytes
  std::size_t certificates = 0, bad_certificates = 0;
  bool all = true;

  for (const auto& c : kCriteria) {
    bool ok = true;
    std::string detail;
    for (const auto& name : c.suites) {
      auto r = run_suite(name);
      const Json report = to_json(r);
      const auto bytes = report.dump(2) + "\n";
      first[name] = bytes;
      if (out) std::ofstream(*out / (name + ".json")) << bytes;
      // Every certificate re-validates after a trip through its JSON text.
      for (const auto& v : report.at("violations")) {
        ++certificates;
        bool good = false;
        try {
          good = revalidate(certificate_from_json(Json::parse(v.dump())));
        } catch (const Error&) {
        }
        bad_certificates += !good;
      }
      ok = ok && r.ok();
      detail += (detail.empty() ? "" : "; ") + brief(r);
      std::cerr << "  " << name << " " << r.wall_seconds << " s\n";
    }
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << detail << "\n" << std::flush;
  }

  // Second full run with the same parameters; reports must match byte for byte.
  std::size_t differing = 0;
  for (const auto& [name, bytes] : first)
    if (to_json(run_suite(name)).dump(2) + "\n" != bytes) {
      ++differing;
      std::cerr << "  report differs: " << name << "\n";
    }
  const bool det = differing == 0 && bad_certificates == 0;
  all = all && det;
  std::cout << (det ? "PASS" : "FAIL") << " criterion 10 (determinism): " << first.size() - differing << "/" << first.size()
            << " reports byte-identical across two runs; " << certificates - bad_certificates << "/" << certificates
            << " violation certificates re-validate after round trip\n";
  return all ? 0 : 1;
}
