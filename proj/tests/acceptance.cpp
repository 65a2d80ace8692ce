// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "gschema/emptiness.hpp"
#include "support.hpp"

using namespace gschema;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Collects the first few failure messages of a criterion.
struct Check {
  std::size_t failures = 0;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) detail << " [" << what << "]";
  }
};

struct Outcome {
  bool pass;
  std::string summary;
};

Outcome finish(const Check& c, const std::string& summary) {
  std::string s = summary;
  if (c.failures) s += "; " + std::to_string(c.failures) + " failure(s):" + c.detail.str();
  return {c.failures == 0, s};
}

Outcome worked_examples() {
  const auto t0 = Clock::now();
  Check c;
  const DataGraph g = bibliography_graph();
  const GraphSchema s = bibliography_schema();

  c.expect(eval(g, parse_query("partOf . series")) == NodeRelation{{"HopcroftU67a", "focs"}}, "partOf . series");

  const Query nested = parse_query("[^creator . journal] . ^creator . partOf . series", Language::Nre);
  c.expect(eval(g, nested) == NodeRelation{{"John E. Hopcroft", "focs"}}, "nested eval");
  c.expect(infer(s, nested).named_pairs() == std::vector<std::pair<std::string, std::string>>{{"e5", "e4"}},
           "nested infer");

  const GraphSchema branches = exclusive_branches_schema();
  const Query q = parse_query("[b] . a . c", Language::Nre);
  c.expect(infer(branches, q).named_pairs() == std::vector<std::pair<std::string, std::string>>{{"e1", "e4"}},
           "counterexample infer");
  Random rnd(101);
  const DataGraph w = witness_graph(branches).graph;
  std::size_t variants = 0;
  for (int i = 0; i < 25; ++i) {
    const DataGraph v = i == 0 ? w : mutate_witness(rnd, branches, w);
    if (!validate(v, branches).ok()) {
      c.expect(false, "variant does not conform");
      continue;
    }
    ++variants;
    c.expect(eval(v, q).empty(), "counterexample eval non-empty");
  }
  const double t = seconds_since(t0);
  c.expect(t < 1.0, "runtime " + std::to_string(t) + " s");
  return finish(c, std::to_string(variants) + " conforming variants, " + std::to_string(t) + " s");
}

Outcome diophantine_regression() {
  const auto t0 = Clock::now();
  Check c;
  const std::vector<SchemaElement> empty = {element("e1", "eps", "a . b . c . c"), element("e2", "a . b . c", "eps")};
  const std::vector<SchemaElement> nonempty = {element("e1", "eps", "a . b . c . c . c . c"),
                                               element("e2", "a . b . c", "eps"), element("e3", "c . c", "eps")};
  const std::vector<SchemaElement> starred = {element("e1", "eps", "a . b . (c . c . c . c)*"),
                                              element("e2", "(a . b . c)*", "eps"), element("e3", "c . c", "eps")};
  c.expect(render_system(build_system(empty)) == "a: x - y = 0\nb: x - y = 0\nc: 2x - y = 0", "empty system");
  const DioSystem sys = build_system(nonempty);
  c.expect(render_system(sys) == "a: x - y = 0\nb: x - y = 0\nc: 4x - y - 2z = 0", "non-empty system");
  c.expect(render_system(build_system(starred)) == "a: x - h2*y = 0\nb: x - h2*y = 0\nc: 4*h1*x - h2*y - 2*z = 0",
           "starred system");
  c.expect(!solve_star_free(build_system(empty), 50), "solution found for the empty schema");
  c.expect(satisfies(sys, Solution{2, 2, 3}), "(2,2,3) rejected");
  const double t = seconds_since(t0);
  c.expect(t < 1.0, "runtime " + std::to_string(t) + " s");
  return finish(c, "3 systems, " + std::to_string(t) + " s");
}

Outcome well_formedness_verdicts() {
  Check c;
  auto accepted = [](std::vector<SchemaElement> els) { return check_well_formed(els).accepted(); };
  c.expect(!accepted({element("e1", "a | b", "a . b")}), "union receiver accepted");
  c.expect(!accepted({element("e1", "a . b . c", "a . (b | c)")}), "split emitter accepted");
  c.expect(accepted({element("e1", "a*", "a . b"), element("e2", "b*", "a . b")}), "starred receivers rejected");
  c.expect(check_well_formed(bibliography_schema()).accepted(), "bibliography schema rejected");
  return finish(c, "4 verdicts");
}

Outcome witness_soundness() {
  Check c;
  Random rnd(104);
  std::size_t ok = 0;
  for (int i = 0; i < 100; ++i) {
    const GraphSchema s = random_well_formed_schema(rnd, 5, 4);
    const bool valid = validate(witness_graph(s).graph, s).ok();
    ok += valid;
    c.expect(valid, "schema " + std::to_string(i));
  }
  return finish(c, std::to_string(ok) + "/100 witnesses validate");
}

Outcome soundness() {
  Check c;
  Random rnd(105);
  const Language langs[] = {Language::Rpq, Language::Nre, Language::Gxpath};
  std::size_t triples = 0, pairs = 0;
  while (triples < 200) {
    const GraphSchema s = random_well_formed_schema(rnd);
    const auto labels = labels_of(s);
    if (labels.empty()) continue;
    const DataGraph w = witness_graph(s).graph;
    const DataGraph g = rnd.chance(0.3) ? w : mutate_witness(rnd, s, w);
    const ValidationResult typing = validate(g, s);
    if (!typing.ok()) {
      c.expect(false, "generated graph does not conform");
      continue;
    }
    const Query q = random_query(rnd, langs[triples % 3], labels, 4);
    ++triples;
    const PairSet e = infer(s, q);
    for (const auto& [u, v] : eval(g, q)) {
      ++pairs;
      c.expect(e.contains(typing.typing.at(u), typing.typing.at(v)), print_query(q) + ": " + u + " -> " + v);
    }
  }
  return finish(c, std::to_string(triples) + " triples, " + std::to_string(pairs) + " result pairs checked");
}

/// Looks for nodes typed (a, b) joined by one of `paths` in `g`; when found,
/// the pair must appear in the query result.
std::optional<bool> realized(const DataGraph& g, const Typing& typing, const std::string& a, const std::string& b,
                             const std::set<Path>& paths, const NodeRelation& result) {
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    if (typing.at(g.id(u)) != a) continue;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      if (typing.at(g.id(v)) != b) continue;
      for (const auto& p : paths) {
        if (connected_in_graph(g, u, v, p)) return result.count({g.id(u), g.id(v)}) > 0;
      }
    }
  }
  return std::nullopt;
}

Outcome rpq_completeness() {
  Check c;
  Random rnd(106);
  std::size_t cases = 0, inferred = 0, extended = 0, skipped = 0;
  while (cases < 100) {
    const GraphSchema s = random_well_formed_schema(rnd);
    const auto labels = labels_of(s);
    if (labels.empty()) continue;
    const Query q = random_query(rnd, Language::Rpq, labels, 3);
    ++cases;
    const auto paths = paths_of(q, 12);
    const PairSet e = infer(s, q);
    const auto& names = *e.universe();

    // Graph-level extension: the witness, then witnesses augmented with extra
    // edges on unbounded labels. Pairs no candidate realises are skipped.
    std::vector<DataGraph> graphs{witness_graph(s).graph};
    for (int k = 0; k < 4; ++k) graphs.push_back(mutate_witness(rnd, s, graphs.front()));
    std::vector<Typing> typings;
    std::vector<NodeRelation> results;
    for (const auto& g : graphs) {
      typings.push_back(validate(g, s).typing);
      results.push_back(eval(g, q));
    }

    for (const auto& [a, b] : e.relation().pairs()) {
      ++inferred;
      bool connected = false;
      for (const auto& p : paths) {
        if (connected_in_schema(s, a, b, p)) {
          connected = true;
          break;
        }
      }
      c.expect(connected, print_query(q) + ": (" + names[a] + ", " + names[b] + ") has no schema path");

      std::optional<bool> hit;
      for (std::size_t k = 0; k < graphs.size() && !hit; ++k)
        hit = realized(graphs[k], typings[k], names[a], names[b], paths, results[k]);
      if (!hit) {
        ++skipped;
        continue;
      }
      ++extended;
      c.expect(*hit, print_query(q) + ": realised pair missing from eval");
    }
  }
  const double rate = inferred ? 100.0 * static_cast<double>(skipped) / static_cast<double>(inferred) : 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%%", rate);
  return finish(c, std::to_string(cases) + " cases, " + std::to_string(inferred) + " inferred pairs path-connected; " +
                       "graph extension checked " + std::to_string(extended) + ", skipped " +
                       std::to_string(skipped) + " (skip rate " + buf + ")");
}

/// Calls f on every bag over `labels` with at most `max_size` items.
void for_each_bag(const std::vector<Label>& labels, std::size_t max_size, const std::function<void(const LabelBag&)>& f,
                  std::size_t from = 0, LabelBag current = {}) {
  f(current);
  if (current.size() == max_size) return;
  for (std::size_t i = from; i < labels.size(); ++i) {
    LabelBag next = current;
    next.add(labels[i]);
    for_each_bag(labels, max_size, f, i, next);
  }
}

Outcome oracle_equivalences() {
  Check c;
  Random rnd(107);
  auto labels = alphabet(4);
  auto with_fresh = labels;
  with_fresh.push_back("z");

  std::size_t membership = 0;
  for (int i = 0; i < 1000; ++i) {
    const Regex t = random_cf_regex(rnd, labels);
    const LabelBag b = random_bag(rnd, with_fresh, 6);
    const bool agree = bag_matches(b, t) == bag_matches_oracle(b, t);
    membership += agree;
    c.expect(agree, "membership " + print_regex(t) + " on " + b.to_string());
  }

  std::size_t normal = 0;
  for (int i = 0; i < 500; ++i) {
    const Regex t = random_cf_regex(rnd, labels);
    const DnfRegex d = norm(t);
    bool agree = true;
    for_each_bag(with_fresh, 4, [&](const LabelBag& b) { agree = agree && d.matches(b) == bag_matches_oracle(b, t); });
    normal += agree;
    c.expect(agree, "norm " + print_regex(t));
  }

  std::size_t closures = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = rnd.between(1, 4);
    const PairSet e = random_pair_set(rnd, numbered_universe(n), 0.3);
    const Pairs raw = pairs_of(e);
    const std::size_t m = rnd.between(0, 4);
    const std::size_t k = m + rnd.between(0, 4);
    const bool agree = pairs_of(reflexive_transitive_closure(e)) == power_union(raw, n, 0, n) &&
                       pairs_of(bounded_closure(e, m, k)) == power_union(raw, n, m, k) &&
                       pairs_of(compose(e, e)) == compose_pairs(raw, raw);
    closures += agree;
    c.expect(agree, "closure case " + std::to_string(i));
  }
  return finish(c, "membership " + std::to_string(membership) + "/1000, norm " + std::to_string(normal) +
                       "/500, closures " + std::to_string(closures) + "/200");
}

Outcome polynomial_smoke() {
  Check c;
  // Chain e1 -l1-> e2 -l2-> ... -l9-> e10 with every edge starred on both ends.
  std::vector<SchemaElement> els;
  for (int i = 1; i <= 10; ++i) {
    const std::string in = i == 1 ? "eps" : "l" + std::to_string(i - 1) + "*";
    const std::string out = i == 10 ? "eps" : "l" + std::to_string(i) + "*";
    els.push_back(element("e" + std::to_string(i), in, out));
  }
  const GraphSchema s(std::move(els));
  c.expect(check_well_formed(s).accepted(), "chain schema rejected");

  Query q = Query::fwd("l1");
  for (int d = 0; d < 64; ++d)
    q = d % 2 == 1 ? Query::star(q) : Query::cat(q, Query::fwd("l" + std::to_string(2 + d / 2 % 8)));
  const auto t0 = Clock::now();
  const PairSet e = infer(s, q);
  const double t = seconds_since(t0);
  c.expect(query_depth(q) == 64, "depth " + std::to_string(query_depth(q)));
  c.expect(e.contains("e1", "e1"), "star keeps the identity");
  c.expect(t < 2.0, "runtime " + std::to_string(t) + " s");
  return finish(c, "depth 64, " + std::to_string(e.size()) + " pairs, " + std::to_string(t) + " s");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worked-example regression", worked_examples},
      {"diophantine regression", diophantine_regression},
      {"well-formedness verdicts", well_formedness_verdicts},
      {"witness soundness", witness_soundness},
      {"inference soundness", soundness},
      {"RPQ completeness", rpq_completeness},
      {"oracle equivalences", oracle_equivalences},
      {"polynomial-behaviour smoke test", polynomial_smoke},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << criteria[i].first << ": " << o.summary << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
