#pragma once

// JSON documents for graphs, schemas, typings and reports.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gschema/element.hpp"
#include "gschema/emptiness.hpp"
#include "gschema/error.hpp"
#include "gschema/graph.hpp"
#include "gschema/query.hpp"
#include "gschema/rex.hpp"
#include "gschema/schema.hpp"
#include "gschema/typing.hpp"

namespace gschema::io {

using nlohmann::json;

namespace detail {

inline void require_object(const json& j, const std::string& what, const std::set<std::string>& required,
                           const std::set<std::string>& optional = {}) {
  if (!j.is_object()) throw FormatError(what + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!required.count(key) && !optional.count(key)) throw FormatError(what + ": unknown key '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw FormatError(what + ": missing key '" + key + "'");
  }
}

inline const std::string& require_string(const json& j, const std::string& key, const std::string& what) {
  const json& v = j.at(key);
  if (!v.is_string()) throw FormatError(what + ": '" + key + "' must be a string");
  return v.get_ref<const std::string&>();
}

inline const json& require_array(const json& j, const std::string& key, const std::string& what) {
  const json& v = j.at(key);
  if (!v.is_array()) throw FormatError(what + ": '" + key + "' must be an array");
  return v;
}

}  // namespace detail

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

/// Reads a whole file, or standard input when `path` is "-".
inline std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Graphs

inline DataGraph graph_from_json(const json& j, bool strict_set = false) {
  detail::require_object(j, "graph", {"nodes", "edges"});
  DataGraph g(strict_set);
  for (const json& n : detail::require_array(j, "nodes", "graph")) {
    detail::require_object(n, "node", {"id"}, {"value"});
    std::string value = n.contains("value") ? detail::require_string(n, "value", "node") : std::string{};
    g.add_node(detail::require_string(n, "id", "node"), std::move(value));
  }
  for (const json& e : detail::require_array(j, "edges", "graph")) {
    detail::require_object(e, "edge", {"from", "label", "to"});
    const auto& from = detail::require_string(e, "from", "edge");
    const auto& to = detail::require_string(e, "to", "edge");
    if (!g.find(from)) throw FormatError("edge references undeclared node '" + from + "'");
    if (!g.find(to)) throw FormatError("edge references undeclared node '" + to + "'");
    g.add_edge(from, detail::require_string(e, "label", "edge"), to);
  }
  return g;
}

inline json graph_to_json(const DataGraph& g) {
  json nodes = json::array();
  for (std::size_t i = 0; i < g.node_count(); ++i) nodes.push_back({{"id", g.id(i)}, {"value", g.value(i)}});
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"from", g.id(e.from)}, {"label", e.label}, {"to", g.id(e.to)}});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

// ---------------------------------------------------------------------------
// Schemas

/// Elements as written; regexes are parsed but not required to be conflict-free.
inline std::vector<SchemaElement> elements_from_json(const json& j) {
  detail::require_object(j, "schema", {"elements"});
  std::vector<SchemaElement> out;
  for (const json& e : detail::require_array(j, "elements", "schema")) {
    detail::require_object(e, "element", {"name", "in", "out"});
    SchemaElement el;
    el.name = detail::require_string(e, "name", "element");
    for (const char* side : {"in", "out"}) {
      try {
        (std::string(side) == "in" ? el.in : el.out) = parse_regex(detail::require_string(e, side, "element"));
      } catch (const ParseError& err) {
        throw FormatError("element '" + el.name + "', " + side + " regex: " + err.what());
      }
    }
    out.push_back(std::move(el));
  }
  return out;
}

inline json elements_to_json(std::span<const SchemaElement> elements) {
  json arr = json::array();
  for (const auto& e : elements)
    arr.push_back({{"name", e.name}, {"in", print_regex(e.in)}, {"out", print_regex(e.out)}});
  return {{"elements", std::move(arr)}};
}

// ---------------------------------------------------------------------------
// Results

inline json typing_to_json(const Typing& t) {
  json j = json::object();
  for (const auto& [node, element] : t) j[node] = element;
  return j;
}

inline json report_to_json(const SchemaReport& r) {
  json non_cf = json::array();
  for (const auto& x : r.non_conflict_free) non_cf.push_back({{"element", x.element}, {"side", x.side}, {"regex", x.regex}});
  json dangling = json::array();
  for (const auto& x : r.dangling) dangling.push_back({{"label", x.label}, {"element", x.element}, {"side", x.side}});
  json overlapping = json::array();
  for (const auto& x : r.overlapping) overlapping.push_back(json::array({x.first, x.second}));
  json ill = json::array();
  for (const auto& x : r.ill_formed) ill.push_back({{"symbol", x.symbol}, {"entry", x.entry}, {"side", x.side}});

  auto status = [&](bool ran, bool ok) -> json { return !ran ? json("skipped") : json(ok ? "pass" : "fail"); };
  return {
      {"accepted", r.accepted()},
      {"conflict_free", {{"status", status(true, r.conflict_free())}, {"violations", std::move(non_cf)}}},
      {"conditions_1_2", {{"status", status(true, r.conditions_1_2())}, {"violations", std::move(dangling)}}},
      {"condition_3",
       {{"status", status(r.normal_form_checks_run, r.condition_3())}, {"violations", std::move(overlapping)}}},
      {"well_formed",
       {{"status", status(r.normal_form_checks_run, r.well_formed())}, {"violations", std::move(ill)}}},
  };
}

inline json validation_to_json(const ValidationResult& v) {
  json untypable = json::array();
  for (const auto& u : v.untypable)
    untypable.push_back({{"node", u.node}, {"in", u.in.to_string()}, {"out", u.out.to_string()}});
  return {{"valid", v.ok()},
          {"typing", typing_to_json(v.typing)},
          {"untypable", std::move(untypable)},
          {"ambiguous", v.ambiguous}};
}

inline json relation_to_json(const NodeRelation& r) {
  json arr = json::array();
  for (const auto& [u, v] : r) arr.push_back({{"from", u}, {"to", v}});
  return arr;
}

inline json pairs_to_json(const PairSet& p) {
  json arr = json::array();
  for (const auto& [a, b] : p.named_pairs()) arr.push_back(json::array({a, b}));
  return arr;
}

inline json emptiness_to_json(const EmptinessResult& r) {
  json lines = json::array();
  const std::string text = render_system(r.system);
  for (std::size_t start = 0; start < text.size();) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  json j = {{"system", std::move(lines)}, {"verdict", emptiness_verdict_name(r.verdict)}};
  if (r.certificate) {
    json cert = json::object();
    for (std::size_t i = 0; i < r.system.variables.size(); ++i) cert[r.system.variables[i]] = (*r.certificate)[i];
    j["certificate"] = std::move(cert);
  }
  return j;
}

}  // namespace gschema::io
