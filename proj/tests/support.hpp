#pragma once

// Fixtures, independent oracles and random generators shared by the unit
// tests and the acceptance binary. Nothing here reuses the library's
// evaluation or closure code.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gschema/element.hpp"
#include "gschema/graph.hpp"
#include "gschema/query.hpp"
#include "gschema/rex.hpp"
#include "gschema/schema.hpp"
#include "gschema/typing.hpp"

namespace testing_support {

using namespace gschema;

// ---------------------------------------------------------------------------
// Fixtures

inline SchemaElement element(std::string name, const std::string& in, const std::string& out) {
  return {std::move(name), parse_regex(in), parse_regex(out)};
}

inline GraphSchema bibliography_schema() {
  return GraphSchema({element("e1", "eps", "(journal | partOf) . creator+"), element("e2", "journal*", "eps"),
                      element("e3", "partOf*", "series"), element("e4", "series*", "eps"),
                      element("e5", "creator*", "eps")});
}

inline GraphSchema exclusive_branches_schema() {
  return GraphSchema({element("e1", "eps", "a | b"), element("e2", "a*", "c"), element("e3", "b*", "d"),
                      element("e4", "c*", "eps"), element("e5", "d*", "eps")});
}

inline DataGraph bibliography_graph() {
  DataGraph g;
  for (const char* id : {"HopcroftT74", "HopcroftU67a", "FOCS8", "jacm", "focs", "Robert Endre Tarjan",
                         "John E. Hopcroft", "Jeffrey D. Ullman"})
    g.add_node(id, id);
  g.add_edge("HopcroftT74", "journal", "jacm");
  g.add_edge("HopcroftT74", "creator", "Robert Endre Tarjan");
  g.add_edge("HopcroftT74", "creator", "John E. Hopcroft");
  g.add_edge("FOCS8", "series", "focs");
  g.add_edge("HopcroftU67a", "partOf", "FOCS8");
  g.add_edge("HopcroftU67a", "creator", "John E. Hopcroft");
  g.add_edge("HopcroftU67a", "creator", "Jeffrey D. Ullman");
  return g;
}

/// Seven nodes: a four-node a-cycle n1 -> n2 -> n4 -> n3 -> n1 with b/c exits from n4.
inline DataGraph cycle_graph() {
  DataGraph g;
  const char* values[] = {"1", "3", "7", "1", "5", "2", "3"};
  for (int i = 0; i < 7; ++i) g.add_node("n" + std::to_string(i + 1), values[i]);
  g.add_edge("n1", "a", "n2");
  g.add_edge("n2", "a", "n4");
  g.add_edge("n3", "a", "n1");
  g.add_edge("n3", "d", "n5");
  g.add_edge("n4", "a", "n3");
  g.add_edge("n4", "b", "n6");
  g.add_edge("n4", "c", "n7");
  return g;
}

// ---------------------------------------------------------------------------
// Relation oracles over explicit pair sets

using Pairs = std::set<std::pair<std::size_t, std::size_t>>;

inline Pairs identity_pairs(std::size_t n) {
  Pairs r;
  for (std::size_t i = 0; i < n; ++i) r.emplace(i, i);
  return r;
}

inline Pairs compose_pairs(const Pairs& a, const Pairs& b) {
  Pairs r;
  for (const auto& [x, y] : a) {
    for (const auto& [y2, z] : b) {
      if (y == y2) r.emplace(x, z);
    }
  }
  return r;
}

inline Pairs unite(Pairs a, const Pairs& b) {
  a.insert(b.begin(), b.end());
  return a;
}

inline Pairs power_pairs(const Pairs& e, std::size_t n, std::size_t k) {
  Pairs r = identity_pairs(n);
  for (std::size_t i = 0; i < k; ++i) r = compose_pairs(r, e);
  return r;
}

/// ⋃_{i=m}^{k} eⁱ by explicit powers.
inline Pairs power_union(const Pairs& e, std::size_t n, std::size_t m, std::size_t k) {
  Pairs r;
  for (std::size_t i = m; i <= k; ++i) r = unite(std::move(r), power_pairs(e, n, i));
  return r;
}

inline Pairs pairs_of(const PairSet& p) {
  Pairs r;
  for (const auto& pr : p.relation().pairs()) r.insert(pr);
  return r;
}

// ---------------------------------------------------------------------------
// Naive query evaluation straight from the semantic equations

inline Pairs naive_eval(const DataGraph& g, const Query& q) {
  const std::size_t n = g.node_count();
  switch (q.kind()) {
    case Query::Kind::Eps: return identity_pairs(n);
    case Query::Kind::Any:
    case Query::Kind::Fwd:
    case Query::Kind::Bwd: {
      Pairs r;
      for (const auto& e : g.edges()) {
        if (q.is(Query::Kind::Any))
          r.emplace(e.from, e.to);
        else if (e.label == q.label())
          q.is(Query::Kind::Fwd) ? r.emplace(e.from, e.to) : r.emplace(e.to, e.from);
      }
      return r;
    }
    case Query::Kind::Union: return unite(naive_eval(g, q.left()), naive_eval(g, q.right()));
    case Query::Kind::Inter: {
      const Pairs a = naive_eval(g, q.left());
      const Pairs b = naive_eval(g, q.right());
      Pairs r;
      for (const auto& p : a) {
        if (b.count(p)) r.insert(p);
      }
      return r;
    }
    case Query::Kind::Concat: return compose_pairs(naive_eval(g, q.left()), naive_eval(g, q.right()));
    // Powers beyond |V| add nothing new to a union that already starts at 0.
    case Query::Kind::Star: return power_union(naive_eval(g, q.inner()), n, 0, n);
    case Query::Kind::Count: {
      const Pairs e = naive_eval(g, q.inner());
      // Past m + |V| the union is saturated; cap to keep the loop short.
      const std::uint64_t top = std::min<std::uint64_t>(q.max(), q.min() + n + 1);
      return power_union(e, n, q.min(), top);
    }
    case Query::Kind::Test: {
      Pairs r;
      for (const auto& [u, v] : naive_eval(g, q.inner())) r.emplace(u, u);
      return r;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Random generation

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(engine_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  template <class T>
  void shuffle(std::vector<T>& v) {
    std::shuffle(v.begin(), v.end(), engine_);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<Label> alphabet(std::size_t k) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

inline Regex atom_regex(const Label& l, Atom a) {
  switch (a) {
    case Atom::One: return Regex::symbol(l);
    case Atom::Star: return Regex::star(Regex::symbol(l));
    case Atom::Plus: return Regex::plus(Regex::symbol(l));
  }
  return Regex::symbol(l);
}

/// Random conflict-free regex over the given labels; each label is used at most once.
inline Regex random_cf_regex(Random& rnd, std::vector<Label> labels, std::size_t depth = 3) {
  if (labels.empty() || depth == 0 || rnd.chance(0.15)) {
    if (labels.empty() || rnd.chance(0.2)) return Regex::epsilon();
    const Atom atoms[] = {Atom::One, Atom::Star, Atom::Plus};
    return atom_regex(labels[0], atoms[rnd.below(3)]);
  }
  if (labels.size() == 1) {
    const Atom atoms[] = {Atom::One, Atom::Star, Atom::Plus};
    return atom_regex(labels[0], atoms[rnd.below(3)]);
  }
  rnd.shuffle(labels);
  const std::size_t cut = rnd.between(1, labels.size() - 1);
  std::vector<Label> left(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<Label> right(labels.begin() + static_cast<std::ptrdiff_t>(cut), labels.end());
  Regex l = random_cf_regex(rnd, left, depth - 1);
  Regex r = random_cf_regex(rnd, right, depth - 1);
  return rnd.chance(0.5) ? Regex::alt(l, r) : Regex::cat(l, r);
}

inline std::vector<Label> labels_of(const GraphSchema& s) {
  const std::set<Label> a = s.alphabet();
  return {a.begin(), a.end()};
}

inline LabelBag random_bag(Random& rnd, const std::vector<Label>& labels, std::size_t max_size) {
  LabelBag b;
  const std::size_t n = rnd.between(0, max_size);
  for (std::size_t i = 0; i < n; ++i) b.add(rnd.pick(labels));
  return b;
}

/// Union of at most two clauses over disjoint label sets, atoms drawn with a bias towards Star.
inline Regex random_side(Random& rnd, const std::vector<Label>& labels, std::size_t max_clauses) {
  std::vector<Label> pool = labels;
  rnd.shuffle(pool);
  const std::size_t clauses = rnd.between(1, max_clauses);
  std::optional<Regex> result;
  std::size_t used = 0;
  for (std::size_t c = 0; c < clauses && used <= pool.size(); ++c) {
    const std::size_t width = rnd.between(0, std::min<std::size_t>(2, pool.size() - used));
    std::optional<Regex> clause;
    for (std::size_t k = 0; k < width; ++k) {
      const Atom a = rnd.chance(0.6) ? Atom::Star : (rnd.chance(0.5) ? Atom::One : Atom::Plus);
      Regex r = atom_regex(pool[used++], a);
      clause = clause ? Regex::cat(*clause, r) : r;
    }
    Regex cl = clause ? *clause : Regex::epsilon();
    result = result ? Regex::alt(*result, cl) : cl;
  }
  return result ? *result : Regex::epsilon();
}

/// Random schema accepted by check_well_formed: <= max_elements elements over <= max_labels labels.
inline GraphSchema random_well_formed_schema(Random& rnd, std::size_t max_elements = 5, std::size_t max_labels = 4) {
  while (true) {
    const std::size_t n = rnd.between(1, max_elements);
    const std::vector<Label> labels = alphabet(rnd.between(1, max_labels));
    std::vector<SchemaElement> els;
    for (std::size_t i = 0; i < n; ++i)
      els.push_back({"e" + std::to_string(i + 1), random_side(rnd, labels, 2), random_side(rnd, labels, 2)});
    if (check_well_formed(els).accepted()) return GraphSchema(std::move(els));
  }
}

/// Random query of the given depth using only constructs of `lang`.
inline Query random_query(Random& rnd, Language lang, const std::vector<Label>& labels, std::size_t depth) {
  if (depth == 0 || rnd.chance(0.2)) {
    std::vector<int> leaves = {0, 1, 1, 1};  // eps, label
    if (lang >= Language::Nre) leaves.insert(leaves.end(), {2, 2});  // backward
    if (lang >= Language::Gxpath) leaves.push_back(3);              // wildcard
    switch (rnd.pick(leaves)) {
      case 0: return Query::eps();
      case 1: return Query::fwd(rnd.pick(labels));
      case 2: return Query::bwd(rnd.pick(labels));
      default: return Query::any();
    }
  }
  std::vector<int> ops = {0, 1, 1, 2};  // union, concat, star
  if (lang >= Language::Nre) ops.push_back(3);           // test
  if (lang >= Language::Gxpath) ops.insert(ops.end(), {4, 5});  // count, inter
  auto sub = [&] { return random_query(rnd, lang, labels, depth - 1); };
  switch (rnd.pick(ops)) {
    case 0: return Query::alt(sub(), sub());
    case 1: return Query::cat(sub(), sub());
    case 2: return Query::star(sub());
    case 3: return Query::test(sub());
    case 4: {
      const std::size_t m = rnd.between(0, 2);
      return Query::count(sub(), m, m + rnd.between(0, 2));
    }
    default: return Query::inter(sub(), sub());
  }
}

inline std::size_t query_depth(const Query& q) {
  switch (q.kind()) {
    case Query::Kind::Union:
    case Query::Kind::Concat:
    case Query::Kind::Inter: return 1 + std::max(query_depth(q.left()), query_depth(q.right()));
    case Query::Kind::Star:
    case Query::Kind::Count:
    case Query::Kind::Test: return 1 + query_depth(q.inner());
    default: return 0;
  }
}

inline PairSet random_pair_set(Random& rnd, const ElementUniverse& u, double density) {
  PairSet p(u);
  for (std::size_t i = 0; i < u->size(); ++i) {
    for (std::size_t j = 0; j < u->size(); ++j) {
      if (rnd.chance(density)) p.insert(i, j);
    }
  }
  return p;
}

inline ElementUniverse numbered_universe(std::size_t n) {
  auto names = std::make_shared<std::vector<std::string>>();
  for (std::size_t i = 0; i < n; ++i) names->push_back("e" + std::to_string(i + 1));
  return names;
}

// ---------------------------------------------------------------------------
// Conforming graphs

/// Normalised entry that built each witness node, by node index.
inline std::vector<const NormalizedEntry*> witness_entries(const NormalizedSchema& d, const DataGraph& g) {
  std::vector<const NormalizedEntry*> out(g.node_count(), nullptr);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const std::string base = g.id(v).substr(0, g.id(v).find('~'));
    for (const auto& e : d.entries) {
      if (e.name == base) out[v] = &e;
    }
  }
  return out;
}

/// Variant of a witness graph: some disjoint copies, plus extra edges between
/// nodes whose entries both accept an unbounded number of that label.
inline DataGraph mutate_witness(Random& rnd, const GraphSchema& s, const DataGraph& witness) {
  DataGraph g;
  const std::size_t copies = rnd.between(1, 3);
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t v = 0; v < witness.node_count(); ++v)
      g.add_node(c == 0 ? witness.id(v) : witness.id(v) + "~" + std::to_string(c), witness.value(v));
    const std::size_t base = c * witness.node_count();
    for (const auto& e : witness.edges()) g.add_edge(base + e.from, e.label, base + e.to);
  }
  const NormalizedSchema d = dnorm(s);
  const auto entries = witness_entries(d, g);
  std::vector<std::tuple<std::size_t, Label, std::size_t>> candidates;
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    for (const auto& [l, a] : entries[u]->out) {
      if (a == Atom::One) continue;
      for (std::size_t v = 0; v < g.node_count(); ++v) {
        auto it = entries[v]->in.find(l);
        if (it != entries[v]->in.end() && it->second != Atom::One) candidates.emplace_back(u, l, v);
      }
    }
  }
  if (!candidates.empty()) {
    const std::size_t extra = rnd.between(0, 4);
    for (std::size_t k = 0; k < extra; ++k) {
      const auto& [u, l, v] = rnd.pick(candidates);
      g.add_edge(u, l, v);
    }
  }
  return g;
}

}  // namespace testing_support
