#pragma once

// Path queries (RPQ ⊂ NRE ⊂ navigational GXPath with intersection), their
// parser and their evaluation over data graphs.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gschema/bit_relation.hpp"
#include "gschema/error.hpp"
#include "gschema/graph.hpp"
#include "gschema/rex.hpp"

namespace gschema {

enum class Language { Rpq = 0, Nre = 1, Gxpath = 2 };

inline const char* language_name(Language l) {
  switch (l) {
    case Language::Rpq: return "rpq";
    case Language::Nre: return "nre";
    case Language::Gxpath: return "gxpath";
  }
  return "?";
}

inline Language parse_language(std::string_view s) {
  if (s == "rpq") return Language::Rpq;
  if (s == "nre") return Language::Nre;
  if (s == "gxpath") return Language::Gxpath;
  throw Error("unknown query language '" + std::string(s) + "' (expected rpq, nre or gxpath)");
}

class Query {
 public:
  enum class Kind { Eps, Any, Fwd, Bwd, Union, Concat, Star, Count, Inter, Test };

  static Query eps();
  static Query any();
  static Query fwd(Label a);
  static Query bwd(Label a);
  static Query alt(Query l, Query r) { return make(Kind::Union, {}, {std::move(l), std::move(r)}); }
  static Query cat(Query l, Query r) { return make(Kind::Concat, {}, {std::move(l), std::move(r)}); }
  static Query inter(Query l, Query r) { return make(Kind::Inter, {}, {std::move(l), std::move(r)}); }
  static Query star(Query q) { return make(Kind::Star, {}, {std::move(q)}); }
  static Query test(Query q) { return make(Kind::Test, {}, {std::move(q)}); }
  static Query count(Query q, std::uint64_t min, std::uint64_t max);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }
  const Label& label() const { return node_->label; }
  const Query& left() const { return node_->children[0]; }
  const Query& right() const { return node_->children[1]; }
  const Query& inner() const { return node_->children[0]; }
  std::uint64_t min() const { return node_->min; }
  std::uint64_t max() const { return node_->max; }

  friend bool operator==(const Query& a, const Query& b);

 private:
  struct Node {
    Kind kind;
    Label label;
    std::vector<Query> children;
    std::uint64_t min = 0;
    std::uint64_t max = 0;
  };
  explicit Query(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Query make(Kind k, Label label, std::vector<Query> children, std::uint64_t min = 0,
                    std::uint64_t max = 0);

  std::shared_ptr<const Node> node_;
};

inline Query Query::make(Kind k, Label label, std::vector<Query> children, std::uint64_t min,
                         std::uint64_t max) {
  return Query{std::make_shared<const Node>(Node{k, std::move(label), std::move(children), min, max})};
}
inline Query Query::eps() { return make(Kind::Eps, {}, {}); }
inline Query Query::any() { return make(Kind::Any, {}, {}); }
inline Query Query::fwd(Label a) {
  if (!is_valid_label(a)) throw Error("invalid label '" + a + "'");
  return make(Kind::Fwd, std::move(a), {});
}
inline Query Query::bwd(Label a) {
  if (!is_valid_label(a)) throw Error("invalid label '" + a + "'");
  return make(Kind::Bwd, std::move(a), {});
}
inline Query Query::count(Query q, std::uint64_t min, std::uint64_t max) {
  if (max < min) throw Error("counter upper bound below lower bound");
  return make(Kind::Count, {}, {std::move(q)}, min, max);
}

inline bool operator==(const Query& a, const Query& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.label() != b.label() || a.min() != b.min() || a.max() != b.max()) return false;
  if (a.node_->children.size() != b.node_->children.size()) return false;
  for (std::size_t i = 0; i < a.node_->children.size(); ++i) {
    if (!(a.node_->children[i] == b.node_->children[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Language classes

inline Language construct_language(Query::Kind k) {
  switch (k) {
    case Query::Kind::Eps:
    case Query::Kind::Fwd:
    case Query::Kind::Union:
    case Query::Kind::Concat:
    case Query::Kind::Star: return Language::Rpq;
    case Query::Kind::Bwd:
    case Query::Kind::Test: return Language::Nre;
    case Query::Kind::Any:
    case Query::Kind::Count:
    case Query::Kind::Inter: return Language::Gxpath;
  }
  return Language::Gxpath;
}

inline const char* construct_name(Query::Kind k) {
  switch (k) {
    case Query::Kind::Eps: return "epsilon";
    case Query::Kind::Any: return "wildcard '_'";
    case Query::Kind::Fwd: return "label";
    case Query::Kind::Bwd: return "backward label '^'";
    case Query::Kind::Union: return "union '|'";
    case Query::Kind::Concat: return "concatenation '.'";
    case Query::Kind::Star: return "star '*'";
    case Query::Kind::Count: return "counter '{m,n}'";
    case Query::Kind::Inter: return "intersection '&'";
    case Query::Kind::Test: return "nesting '[...]'";
  }
  return "?";
}

/// Smallest language containing every construct of `q`.
inline Language language_class(const Query& q) {
  Language l = construct_language(q.kind());
  switch (q.kind()) {
    case Query::Kind::Union:
    case Query::Kind::Concat:
    case Query::Kind::Inter: {
      const Language a = language_class(q.left());
      const Language b = language_class(q.right());
      l = std::max({l, a, b});
      break;
    }
    case Query::Kind::Star:
    case Query::Kind::Count:
    case Query::Kind::Test: l = std::max(l, language_class(q.inner())); break;
    default: break;
  }
  return l;
}

namespace detail {

inline const Query* first_outside(const Query& q, Language lang) {
  if (construct_language(q.kind()) > lang) return &q;
  switch (q.kind()) {
    case Query::Kind::Union:
    case Query::Kind::Concat:
    case Query::Kind::Inter:
      if (auto* p = first_outside(q.left(), lang)) return p;
      return first_outside(q.right(), lang);
    case Query::Kind::Star:
    case Query::Kind::Count:
    case Query::Kind::Test: return first_outside(q.inner(), lang);
    default: return nullptr;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int query_precedence(const Query& q) {
  switch (q.kind()) {
    case Query::Kind::Union: return 0;
    case Query::Kind::Inter: return 1;
    case Query::Kind::Concat: return 2;
    case Query::Kind::Star:
    case Query::Kind::Count: return 3;
    default: return 4;
  }
}

inline void print_query_to(std::string& out, const Query& q, int min_prec) {
  const bool paren = query_precedence(q) < min_prec;
  if (paren) out += "(";
  switch (q.kind()) {
    case Query::Kind::Eps: out += "eps"; break;
    case Query::Kind::Any: out += "_"; break;
    case Query::Kind::Fwd: out += q.label(); break;
    case Query::Kind::Bwd: out += "^" + q.label(); break;
    case Query::Kind::Union:
      print_query_to(out, q.left(), 0);
      out += " | ";
      print_query_to(out, q.right(), 1);
      break;
    case Query::Kind::Inter:
      print_query_to(out, q.left(), 1);
      out += " & ";
      print_query_to(out, q.right(), 2);
      break;
    case Query::Kind::Concat:
      print_query_to(out, q.left(), 2);
      out += " . ";
      print_query_to(out, q.right(), 3);
      break;
    case Query::Kind::Star:
      print_query_to(out, q.inner(), 4);
      out += "*";
      break;
    case Query::Kind::Count:
      print_query_to(out, q.inner(), 4);
      out += "{" + std::to_string(q.min()) + "," + std::to_string(q.max()) + "}";
      break;
    case Query::Kind::Test:
      out += "[";
      print_query_to(out, q.inner(), 0);
      out += "]";
      break;
  }
  if (paren) out += ")";
}

}  // namespace detail

inline std::string print_query(const Query& q) {
  std::string out;
  detail::print_query_to(out, q, 0);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Query& q) { return os << print_query(q); }

// ---------------------------------------------------------------------------
// Parsing
//
//   q     := inter ("|" inter)*
//   inter := cat ("&" cat)*
//   cat   := post ("." post)*
//   post  := atom ("*" | "{" NAT "," (NAT | "") "}")?
//   atom  := "eps" | "_" | LABEL | "^" LABEL | "[" q "]" | "(" q ")"

namespace detail {

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : text_(text) {}

  Query parse() {
    Query q = alt();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "'|', '&', '.', postfix operator or end of input");
    return q;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(pos_, std::string("'") + c + "'");
  }

  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::optional<std::uint64_t> number() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const std::uint64_t d = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) throw ParseError(start, "a counter that fits in 64 bits");
      v = v * 10 + d;
      ++pos_;
    }
    if (pos_ == start) return std::nullopt;
    return v;
  }

  Query alt() {
    Query q = inter();
    while (accept('|')) q = Query::alt(std::move(q), inter());
    return q;
  }

  Query inter() {
    Query q = cat();
    while (accept('&')) q = Query::inter(std::move(q), cat());
    return q;
  }

  Query cat() {
    Query q = post();
    while (accept('.')) q = Query::cat(std::move(q), post());
    return q;
  }

  Query post() {
    Query q = atom();
    if (accept('*')) return Query::star(std::move(q));
    if (accept('{')) {
      const std::size_t at = pos_;
      auto lo = number();
      if (!lo) throw ParseError(pos_, "a natural number");
      expect(',');
      auto hi = number();
      expect('}');
      if (!hi) return Query::cat(Query::count(q, *lo, *lo), Query::star(q));
      if (*hi < *lo) throw ParseError(at, "counter bounds with m <= n");
      return Query::count(std::move(q), *lo, *hi);
    }
    return q;
  }

  Query atom() {
    skip_ws();
    if (accept('(')) {
      Query q = alt();
      expect(')');
      return q;
    }
    if (accept('[')) {
      Query q = alt();
      expect(']');
      return Query::test(std::move(q));
    }
    if (accept('^')) {
      const std::size_t at = pos_;
      std::string w = word();
      if (w.empty() || w == "eps" || w == "_") throw ParseError(at, "a label after '^'");
      return Query::bwd(std::move(w));
    }
    const std::size_t at = pos_;
    std::string w = word();
    if (w.empty()) throw ParseError(at, "'eps', '_', a label, '^', '[' or '('");
    if (w == "eps") return Query::eps();
    if (w == "_") return Query::any();
    return Query::fwd(std::move(w));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` and rejects constructs outside `lang` with LanguageViolation.
inline Query parse_query(std::string_view text, Language lang = Language::Gxpath) {
  Query q = detail::QueryParser(text).parse();
  if (const Query* bad = detail::first_outside(q, lang)) {
    throw LanguageViolation(std::string(construct_name(bad->kind())) + " is not allowed in " +
                            language_name(lang) + " (requires " +
                            language_name(construct_language(bad->kind())) + ")");
  }
  return q;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline BitRelation label_relation(const DataGraph& g, const Label* label, bool backward) {
  BitRelation r(g.node_count());
  for (const auto& e : g.edges()) {
    if (label && e.label != *label) continue;
    if (backward)
      r.set(e.to, e.from);
    else
      r.set(e.from, e.to);
  }
  return r;
}

inline BitRelation relation_power(BitRelation base, std::uint64_t exp) {
  BitRelation result = BitRelation::identity(base.dimension());
  while (exp) {
    if (exp & 1U) result = compose(result, base);
    exp >>= 1U;
    if (exp) base = compose(base, base);
  }
  return result;
}

}  // namespace detail

/// ⟦q⟧ over node indices of `g`.
inline BitRelation eval_relation(const DataGraph& g, const Query& q) {
  const std::size_t n = g.node_count();
  switch (q.kind()) {
    case Query::Kind::Eps: return BitRelation::identity(n);
    case Query::Kind::Any: return detail::label_relation(g, nullptr, false);
    case Query::Kind::Fwd: return detail::label_relation(g, &q.label(), false);
    case Query::Kind::Bwd: return detail::label_relation(g, &q.label(), true);
    case Query::Kind::Union: return eval_relation(g, q.left()) | eval_relation(g, q.right());
    case Query::Kind::Inter: return eval_relation(g, q.left()) & eval_relation(g, q.right());
    case Query::Kind::Concat: return compose(eval_relation(g, q.left()), eval_relation(g, q.right()));
    case Query::Kind::Star: {
      // Semi-naive: only pairs derived in the previous round are extended.
      const BitRelation step = eval_relation(g, q.inner());
      BitRelation result = BitRelation::identity(n);
      BitRelation frontier = result;
      while (!frontier.empty()) {
        frontier = compose(frontier, step) - result;
        result |= frontier;
      }
      return result;
    }
    case Query::Kind::Count: {
      // acc_k = ∪_{i=m}^{k} R^i satisfies acc_{k+1} = R^m ∪ acc_k ∘ R, so it stops changing once stable.
      const BitRelation step = eval_relation(g, q.inner());
      const BitRelation lowest = detail::relation_power(step, q.min());
      BitRelation acc = lowest;
      for (std::uint64_t k = q.min(); k < q.max(); ++k) {
        BitRelation next = lowest | compose(acc, step);
        if (next == acc) break;
        acc = std::move(next);
      }
      return acc;
    }
    case Query::Kind::Test: {
      const BitRelation inner = eval_relation(g, q.inner());
      BitRelation r(n);
      for (std::size_t u : inner.domain()) r.set(u, u);
      return r;
    }
  }
  return BitRelation(n);
}

using NodeRelation = std::set<std::pair<NodeId, NodeId>>;

inline NodeRelation eval(const DataGraph& g, const Query& q) {
  NodeRelation out;
  for (const auto& [u, v] : eval_relation(g, q).pairs()) out.emplace(g.id(u), g.id(v));
  return out;
}

// ---------------------------------------------------------------------------
// Paths

using Path = std::vector<Label>;

namespace detail {

inline std::set<Path> paths_up_to(const Query& q, std::size_t max_len) {
  switch (q.kind()) {
    case Query::Kind::Eps: return {Path{}};
    case Query::Kind::Fwd:
      if (max_len == 0) return {};
      return {Path{q.label()}};
    case Query::Kind::Union: {
      auto l = paths_up_to(q.left(), max_len);
      l.merge(paths_up_to(q.right(), max_len));
      return l;
    }
    case Query::Kind::Concat: {
      const auto l = paths_up_to(q.left(), max_len);
      const auto r = paths_up_to(q.right(), max_len);
      std::set<Path> out;
      for (const auto& a : l) {
        for (const auto& b : r) {
          if (a.size() + b.size() > max_len) continue;
          Path p = a;
          p.insert(p.end(), b.begin(), b.end());
          out.insert(std::move(p));
        }
      }
      return out;
    }
    case Query::Kind::Star: {
      const auto step = paths_up_to(q.inner(), max_len);
      std::set<Path> out{Path{}};
      std::set<Path> frontier = out;
      while (!frontier.empty()) {
        std::set<Path> next;
        for (const auto& a : frontier) {
          for (const auto& b : step) {
            if (b.empty() || a.size() + b.size() > max_len) continue;
            Path p = a;
            p.insert(p.end(), b.begin(), b.end());
            if (!out.count(p)) next.insert(std::move(p));
          }
        }
        out.insert(next.begin(), next.end());
        frontier = std::move(next);
      }
      return out;
    }
    default: throw LanguageViolation("paths are only defined for RPQs");
  }
}

}  // namespace detail

/// Every label sequence of length <= max_len that can match the RPQ `q`.
inline std::set<Path> paths_of(const Query& q, std::size_t max_len) {
  if (language_class(q) != Language::Rpq) throw LanguageViolation("paths are only defined for RPQs");
  return detail::paths_up_to(q, max_len);
}

/// Whether node `from` reaches node `to` by following forward edges labelled `path`.
inline bool connected_in_graph(const DataGraph& g, std::size_t from, std::size_t to, std::span<const Label> path) {
  std::vector<char> current(g.node_count(), 0);
  current[from] = 1;
  for (const Label& a : path) {
    std::vector<char> next(g.node_count(), 0);
    for (const auto& e : g.edges()) {
      if (current[e.from] && e.label == a) next[e.to] = 1;
    }
    current = std::move(next);
  }
  return current[to] != 0;
}

inline bool connected_in_graph(const DataGraph& g, const NodeId& from, const NodeId& to,
                               std::span<const Label> path) {
  return connected_in_graph(g, g.index_of(from), g.index_of(to), path);
}

}  // namespace gschema
