#pragma once

// Schema-level analyses: the dangling-label and disjointness conditions,
// double normalisation, well-formedness and the witness-graph construction.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gschema/element.hpp"
#include "gschema/error.hpp"
#include "gschema/graph.hpp"
#include "gschema/rex.hpp"

namespace gschema {

// ---------------------------------------------------------------------------
// Report

struct NonConflictFree {
  std::string element;
  std::string side;  // "in" or "out"
  std::string regex;
};

/// A label used on one side of some element but on the opposite side of none.
struct DanglingLabel {
  Label label;
  std::string element;
  std::string side;  // side where it is used: "in" (never emitted) or "out" (never received)
};

/// Two distinct elements that could type the same node.
struct OverlappingElements {
  std::string first;
  std::string second;
};

struct WellFormedViolation {
  Label symbol;
  std::string entry;
  std::string side;  // "in" or "out"
};

/// How the pairwise disjointness condition treats the empty bag.
enum class DisjointnessMode {
  /// Languages may share the empty bag on one side; only a shared non-empty bag counts as overlap.
  ModuloEmptyBag,
  /// Any shared bag, including the empty one, counts as overlap.
  Literal,
};

struct SchemaReport {
  std::vector<NonConflictFree> non_conflict_free;
  std::vector<DanglingLabel> dangling;
  std::vector<OverlappingElements> overlapping;
  std::vector<WellFormedViolation> ill_formed;
  /// Disjointness and well-formedness need conflict-free regexes; false when they were skipped.
  bool normal_form_checks_run = false;

  bool conflict_free() const { return non_conflict_free.empty(); }
  bool conditions_1_2() const { return dangling.empty(); }
  bool condition_3() const { return normal_form_checks_run && overlapping.empty(); }
  bool well_formed() const { return normal_form_checks_run && ill_formed.empty(); }
  bool accepted() const { return conflict_free() && conditions_1_2() && condition_3() && well_formed(); }
};

// ---------------------------------------------------------------------------
// Conditions

namespace detail {

inline bool atoms_meet(const Atom* a, const Atom* b) {
  // absent = {0}; One = {1}; Plus = {>=1}; Star = {>=0}
  if (!a && !b) return true;
  if (!a) return *b == Atom::Star;
  if (!b) return *a == Atom::Star;
  return true;
}

/// Whether the two clauses accept a common bag; with `nonempty`, a common non-empty bag.
inline bool clauses_meet(const Clause& x, const Clause& y, bool nonempty) {
  bool shared_label = false;
  for (const auto& [l, a] : x) {
    auto it = y.find(l);
    if (it != y.end()) shared_label = true;
    if (!atoms_meet(&a, it == y.end() ? nullptr : &it->second)) return false;
  }
  for (const auto& [l, b] : y) {
    if (!x.count(l) && !atoms_meet(nullptr, &b)) return false;
  }
  return !nonempty || shared_label;
}

inline bool dnf_meet(const DnfRegex& x, const DnfRegex& y, bool nonempty) {
  for (const auto& cx : x.clauses) {
    for (const auto& cy : y.clauses) {
      if (clauses_meet(cx, cy, nonempty)) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Whether ⟦x⟧ ∩ ⟦y⟧ is non-empty, for conflict-free regexes.
inline bool languages_intersect(const Regex& x, const Regex& y) {
  return detail::dnf_meet(norm(x), norm(y), false);
}

/// Fills the dangling-label and disjointness parts of a report. Regexes need not be
/// conflict-free for the dangling-label part; disjointness is skipped otherwise.
inline SchemaReport check_conditions(std::span<const SchemaElement> elements,
                                     DisjointnessMode mode = DisjointnessMode::ModuloEmptyBag) {
  SchemaReport r;
  std::set<Label> received, emitted;
  for (const auto& e : elements) {
    const auto in = sym(e.in);
    const auto out = sym(e.out);
    received.insert(in.begin(), in.end());
    emitted.insert(out.begin(), out.end());
    if (!is_conflict_free(e.in)) r.non_conflict_free.push_back({e.name, "in", print_regex(e.in)});
    if (!is_conflict_free(e.out)) r.non_conflict_free.push_back({e.name, "out", print_regex(e.out)});
  }
  for (const auto& e : elements) {
    for (const auto& l : sym(e.in)) {
      if (!emitted.count(l)) r.dangling.push_back({l, e.name, "in"});
    }
    for (const auto& l : sym(e.out)) {
      if (!received.count(l)) r.dangling.push_back({l, e.name, "out"});
    }
  }
  if (!r.conflict_free()) return r;

  r.normal_form_checks_run = true;
  const bool nonempty = mode == DisjointnessMode::ModuloEmptyBag;
  std::vector<DnfRegex> ins, outs;
  for (const auto& e : elements) {
    ins.push_back(norm(e.in));
    outs.push_back(norm(e.out));
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (detail::dnf_meet(ins[i], ins[j], nonempty) && detail::dnf_meet(outs[i], outs[j], nonempty))
        r.overlapping.push_back({elements[i].name, elements[j].name});
    }
  }
  return r;
}

inline SchemaReport check_conditions(const GraphSchema& s,
                                     DisjointnessMode mode = DisjointnessMode::ModuloEmptyBag) {
  return check_conditions(s.elements(), mode);
}

// ---------------------------------------------------------------------------
// Double normalisation

struct NormalizedEntry {
  std::string name;    // origin#i.j, 1-based clause indices
  std::string origin;  // source element name
  std::size_t origin_index;
  Clause in;
  Clause out;
};

/// One entry per (in-clause, out-clause) pair of every element.
struct NormalizedSchema {
  std::vector<NormalizedEntry> entries;

  /// Entries generated by the named source element.
  std::vector<const NormalizedEntry*> entries_of(const std::string& origin) const {
    std::vector<const NormalizedEntry*> out;
    for (const auto& e : entries) {
      if (e.origin == origin) out.push_back(&e);
    }
    return out;
  }
};

inline NormalizedSchema dnorm(std::span<const SchemaElement> elements) {
  NormalizedSchema d;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto& e = elements[k];
    const DnfRegex in = norm(e.in);
    const DnfRegex out = norm(e.out);
    for (std::size_t i = 0; i < in.clauses.size(); ++i) {
      for (std::size_t j = 0; j < out.clauses.size(); ++j) {
        d.entries.push_back({e.name + "#" + std::to_string(i + 1) + "." + std::to_string(j + 1), e.name, k,
                             in.clauses[i], out.clauses[j]});
      }
    }
  }
  return d;
}

inline NormalizedSchema dnorm(const GraphSchema& s) { return dnorm(s.elements()); }

// ---------------------------------------------------------------------------
// Well-formedness

/// Violations of the starred-receiver / starred-emitter rule on the normalised entries.
inline std::vector<WellFormedViolation> well_formedness_violations(const NormalizedSchema& d) {
  std::map<Label, std::size_t> emitters, receivers;
  for (const auto& e : d.entries) {
    for (const auto& [l, _] : e.out) ++emitters[l];
    for (const auto& [l, _] : e.in) ++receivers[l];
  }
  std::vector<WellFormedViolation> v;
  for (const auto& e : d.entries) {
    for (const auto& [l, atom] : e.in) {
      if (emitters[l] >= 2 && atom != Atom::Star) v.push_back({l, e.name, "in"});
    }
    for (const auto& [l, atom] : e.out) {
      if (receivers[l] >= 2 && atom != Atom::Star) v.push_back({l, e.name, "out"});
    }
  }
  return v;
}

/// Runs every gate: conflict-freedom, dangling labels, disjointness and well-formedness.
inline SchemaReport check_well_formed(std::span<const SchemaElement> elements,
                                      DisjointnessMode mode = DisjointnessMode::ModuloEmptyBag) {
  SchemaReport r = check_conditions(elements, mode);
  if (r.normal_form_checks_run) r.ill_formed = well_formedness_violations(dnorm(elements));
  return r;
}

inline SchemaReport check_well_formed(const GraphSchema& s,
                                      DisjointnessMode mode = DisjointnessMode::ModuloEmptyBag) {
  return check_well_formed(s.elements(), mode);
}

// ---------------------------------------------------------------------------
// Witness graph

struct Witness {
  DataGraph graph;
  /// Node -> source element; node ids are the normalised entry names.
  Typing typing;
};

namespace detail {

inline bool unbounded(Atom a) { return a != Atom::One; }

}  // namespace detail

/// Builds a conforming graph with exactly one node per normalised entry. Each node
/// carries at least one incoming (outgoing) edge for every label of its in (out) clause.
/// Throws SchemaError if the schema is not accepted by check_well_formed.
inline Witness witness_graph(const GraphSchema& s) {
  const SchemaReport report = check_well_formed(s);
  if (!report.accepted()) throw SchemaError("witness requires a schema that passes every gate");

  const NormalizedSchema d = dnorm(s);
  Witness w;
  for (const auto& e : d.entries) {
    w.graph.add_node(e.name, e.origin);
    w.typing.emplace(e.name, e.origin);
  }

  std::set<Label> labels;
  for (const auto& e : d.entries) {
    for (const auto& [l, _] : e.out) labels.insert(l);
    for (const auto& [l, _] : e.in) labels.insert(l);
  }

  for (const Label& a : labels) {
    std::vector<std::size_t> producers, consumers;
    std::optional<std::size_t> flexible_producer, flexible_consumer;
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
      if (auto it = d.entries[i].out.find(a); it != d.entries[i].out.end()) {
        producers.push_back(i);
        if (detail::unbounded(it->second) && !flexible_producer) flexible_producer = i;
      }
      if (auto it = d.entries[i].in.find(a); it != d.entries[i].in.end()) {
        consumers.push_back(i);
        if (detail::unbounded(it->second) && !flexible_consumer) flexible_consumer = i;
      }
    }
    if (producers.empty() || consumers.empty())
      throw AssignmentInfeasible("label '" + a + "' has no " + (producers.empty() ? "emitter" : "receiver"));

    // Pair participants one-to-one; the surplus on the larger side is routed
    // to a partner that accepts unbounded multiplicity.
    const std::size_t paired = std::min(producers.size(), consumers.size());
    for (std::size_t i = 0; i < paired; ++i) w.graph.add_edge(producers[i], a, consumers[i]);
    if (producers.size() > paired) {
      if (!flexible_consumer)
        throw AssignmentInfeasible("label '" + a + "': more emitters than receivers and no starred receiver");
      for (std::size_t i = paired; i < producers.size(); ++i) w.graph.add_edge(producers[i], a, *flexible_consumer);
    }
    if (consumers.size() > paired) {
      if (!flexible_producer)
        throw AssignmentInfeasible("label '" + a + "': more receivers than emitters and no starred emitter");
      for (std::size_t i = paired; i < consumers.size(); ++i) w.graph.add_edge(*flexible_producer, a, consumers[i]);
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Schema paths

/// Whether element `from` reaches element `to` through a chain of elements along `path`.
inline bool connected_in_schema(const GraphSchema& s, std::size_t from, std::size_t to,
                                std::span<const Label> path) {
  std::vector<char> current(s.size(), 0);
  current[from] = 1;
  for (const Label& a : path) {
    std::vector<char> next(s.size(), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!current[i] || !s.out_symbols(i).count(a)) continue;
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s.in_symbols(j).count(a)) next[j] = 1;
      }
    }
    current = std::move(next);
  }
  return current[to] != 0;
}

inline bool connected_in_schema(const GraphSchema& s, const std::string& from, const std::string& to,
                                std::span<const Label> path) {
  return connected_in_schema(s, s.index_of(from), s.index_of(to), path);
}

}  // namespace gschema
