#pragma once

#include <string>

#include <json.hpp>

#include "forge/core/error.hpp"
#include "forge/graph/graph.hpp"

namespace forge {

using Json = nlohmann::json;

namespace detail {

inline const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(where + "/" + key, "missing field");
  return j.at(key);
}

inline int require_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw MalformedInput(where, "integer expected");
  return j.get<int>();
}

}  // namespace detail

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [i, j] : g.edges()) edges.push_back({i, j});
  return Json{{"n", g.n()}, {"edges", edges}};
}

inline Graph graph_from_json(const Json& j, const std::string& where = "") {
  int n = detail::require_int(detail::require(j, "n", where), where + "/n");
  if (n < 0) throw MalformedInput(where + "/n", "negative vertex count");
  const Json& edges = detail::require(j, "edges", where);
  if (!edges.is_array()) throw MalformedInput(where + "/edges", "array expected");
  Graph g(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    std::string at = where + "/edges/" + std::to_string(k);
    const Json& e = edges[k];
    if (!e.is_array() || e.size() != 2) throw MalformedInput(at, "pair [i,j] expected");
    int a = detail::require_int(e[0], at + "/0"), b = detail::require_int(e[1], at + "/1");
    if (a < 0 || a >= n || b < 0 || b >= n) throw MalformedInput(at, "vertex out of range");
    if (a == b) throw MalformedInput(at, "self-loop");
    g.add_edge(a, b);
  }
  return g;
}

inline Json to_json(const VertexMap& m) { return Json{{"map", m.image}}; }

inline VertexMap vertex_map_from_json(const Json& j, const std::string& where = "") {
  const Json& arr = detail::require(j, "map", where);
  if (!arr.is_array()) throw MalformedInput(where + "/map", "array expected");
  VertexMap m;
  for (std::size_t k = 0; k < arr.size(); ++k) m.image.push_back(detail::require_int(arr[k], where + "/map/" + std::to_string(k)));
  return m;
}

}  // namespace forge
