#pragma once

// Edge-labelled data graphs and their validation against schemas.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gschema/element.hpp"
#include "gschema/error.hpp"
#include "gschema/rex.hpp"

namespace gschema {

using NodeId = std::string;

struct Edge {
  NodeId from;
  Label label;
  NodeId to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Nodes with opaque values and a multiset of labelled edges.
///
/// Parallel edges with the same (from, label, to) are allowed unless the graph
/// is built in strict-set mode.
class DataGraph {
 public:
  explicit DataGraph(bool strict_set = false) : strict_set_(strict_set) {}

  bool strict_set() const { return strict_set_; }

  std::size_t add_node(NodeId id, std::string value = {}) {
    if (id.empty()) throw FormatError("node id must be non-empty");
    if (index_.count(id)) throw FormatError("duplicate node id '" + id + "'");
    index_.emplace(id, ids_.size());
    ids_.push_back(std::move(id));
    values_.push_back(std::move(value));
    in_.emplace_back();
    out_.emplace_back();
    return ids_.size() - 1;
  }

  void add_edge(const NodeId& from, const Label& label, const NodeId& to) {
    add_edge(index_of(from), label, index_of(to));
  }

  void add_edge(std::size_t from, const Label& label, std::size_t to) {
    if (from >= ids_.size() || to >= ids_.size()) throw UnknownName("edge endpoint out of range");
    if (!is_valid_label(label)) throw FormatError("invalid edge label '" + label + "'");
    if (strict_set_) {
      for (std::size_t e : out_[from]) {
        if (edges_[e].to == to && edges_[e].label == label)
          throw FormatError("duplicate edge " + ids_[from] + " -" + label + "-> " + ids_[to] +
                            " in strict-set mode");
      }
    }
    out_[from].push_back(edges_.size());
    in_[to].push_back(edges_.size());
    edges_.push_back({from, label, to});
  }

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const NodeId& id(std::size_t i) const { return ids_[i]; }
  const std::string& value(std::size_t i) const { return values_[i]; }
  const std::vector<NodeId>& ids() const { return ids_; }

  std::optional<std::size_t> find(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const NodeId& id) const {
    if (auto i = find(id)) return *i;
    throw UnknownName("unknown node '" + id + "'");
  }

  struct IndexedEdge {
    std::size_t from;
    Label label;
    std::size_t to;
  };

  const std::vector<IndexedEdge>& edges() const { return edges_; }
  /// Indices into edges() of the edges leaving / entering node i.
  const std::vector<std::size_t>& out_edges(std::size_t i) const { return out_[i]; }
  const std::vector<std::size_t>& in_edges(std::size_t i) const { return in_[i]; }

  LabelBag in_bag(std::size_t i) const {
    LabelBag b;
    for (std::size_t e : in_[i]) b.add(edges_[e].label);
    return b;
  }
  LabelBag out_bag(std::size_t i) const {
    LabelBag b;
    for (std::size_t e : out_[i]) b.add(edges_[e].label);
    return b;
  }

 private:
  bool strict_set_;
  std::vector<NodeId> ids_;
  std::vector<std::string> values_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<IndexedEdge> edges_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_;
};

inline LabelBag in_bag(const DataGraph& g, const NodeId& v) { return g.in_bag(g.index_of(v)); }
inline LabelBag out_bag(const DataGraph& g, const NodeId& v) { return g.out_bag(g.index_of(v)); }

inline bool node_in_element(const DataGraph& g, std::size_t v, const SchemaElement& e) {
  return bag_matches(g.in_bag(v), e.in) && bag_matches(g.out_bag(v), e.out);
}

inline bool node_in_element(const DataGraph& g, const NodeId& v, const SchemaElement& e) {
  return node_in_element(g, g.index_of(v), e);
}

/// Node -> element name.
using Typing = std::map<NodeId, std::string>;

struct UntypableNode {
  NodeId node;
  LabelBag in;
  LabelBag out;
};

struct ValidationResult {
  Typing typing;
  /// Non-empty iff validation failed.
  std::vector<UntypableNode> untypable;
  /// Nodes matched by more than one element; typed with the first in schema order.
  std::vector<NodeId> ambiguous;

  bool ok() const { return untypable.empty(); }
};

/// Types every node with the first element (in schema order) whose in/out regexes accept its bags.
inline ValidationResult validate(const DataGraph& g, const GraphSchema& s) {
  ValidationResult r;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const LabelBag in = g.in_bag(v);
    const LabelBag out = g.out_bag(v);
    std::size_t matches = 0;
    for (const auto& e : s) {
      if (!detail::cf_matches(in, e.in) || !detail::cf_matches(out, e.out)) continue;
      if (matches++ == 0) r.typing.emplace(g.id(v), e.name);
    }
    if (matches == 0) r.untypable.push_back({g.id(v), in, out});
    if (matches > 1) r.ambiguous.push_back(g.id(v));
  }
  return r;
}

}  // namespace gschema
