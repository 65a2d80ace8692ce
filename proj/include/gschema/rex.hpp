#pragma once

// Regular expressions over edge labels with unordered concatenation.
//
// A regex denotes a set of label bags (multisets), not a set of words:
// `a . b` and `b . a` are the same language. The conflict-free (CF)
// subclass, where every label occurs at most once and repetition only
// applies to single labels, admits compositional membership and a
// disjunctive normal form whose clauses are plain label -> atom maps.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gschema/error.hpp"

namespace gschema {

using Label = std::string;

inline bool is_valid_label(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

// ---------------------------------------------------------------------------
// LabelBag

/// Multiset of labels. Zero counts are never stored.
class LabelBag {
 public:
  LabelBag() = default;
  LabelBag(std::initializer_list<std::pair<const Label, std::size_t>> init) {
    for (const auto& [l, n] : init) add(l, n);
  }

  void add(const Label& label, std::size_t n = 1) {
    if (n == 0) return;
    counts_[label] += n;
  }

  /// Removes up to `n` copies; returns how many were removed.
  std::size_t remove(const Label& label, std::size_t n = 1) {
    auto it = counts_.find(label);
    if (it == counts_.end()) return 0;
    std::size_t taken = std::min(n, it->second);
    it->second -= taken;
    if (it->second == 0) counts_.erase(it);
    return taken;
  }

  std::size_t count(const Label& label) const {
    auto it = counts_.find(label);
    return it == counts_.end() ? 0 : it->second;
  }

  /// Total number of labels, with multiplicity.
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [_, c] : counts_) n += c;
    return n;
  }

  bool empty() const { return counts_.empty(); }
  const std::map<Label, std::size_t>& counts() const { return counts_; }

  LabelBag& operator+=(const LabelBag& other) {
    for (const auto& [l, n] : other.counts_) add(l, n);
    return *this;
  }
  friend LabelBag operator+(LabelBag a, const LabelBag& b) { return a += b; }

  friend bool operator==(const LabelBag&, const LabelBag&) = default;
  friend auto operator<=>(const LabelBag&, const LabelBag&) = default;

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [l, n] : counts_) {
      if (!first) out += ",";
      first = false;
      out += l + ":" + std::to_string(n);
    }
    return out + "}";
  }

 private:
  std::map<Label, std::size_t> counts_;
};

inline std::ostream& operator<<(std::ostream& os, const LabelBag& b) { return os << b.to_string(); }

// ---------------------------------------------------------------------------
// Regex AST

class Regex {
 public:
  enum class Kind { Epsilon, Symbol, Union, Concat, Star, Plus };

  Regex() : Regex(epsilon()) {}

  static Regex epsilon();
  static Regex symbol(Label label);
  static Regex alt(Regex l, Regex r) { return binary(Kind::Union, std::move(l), std::move(r)); }
  static Regex cat(Regex l, Regex r) { return binary(Kind::Concat, std::move(l), std::move(r)); }
  static Regex star(Regex t) { return unary(Kind::Star, std::move(t)); }
  static Regex plus(Regex t) { return unary(Kind::Plus, std::move(t)); }

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  /// Label of a Symbol node.
  const Label& label() const { return node_->label; }
  /// Left child of Union/Concat, or the operand of Star/Plus.
  const Regex& left() const { return node_->children[0]; }
  const Regex& right() const { return node_->children[1]; }
  const Regex& inner() const { return node_->children[0]; }

  friend bool operator==(const Regex& a, const Regex& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Epsilon: return true;
      case Kind::Symbol: return a.label() == b.label();
      case Kind::Star:
      case Kind::Plus: return a.inner() == b.inner();
      case Kind::Union:
      case Kind::Concat: return a.left() == b.left() && a.right() == b.right();
    }
    return false;
  }

 private:
  struct Node {
    Kind kind;
    Label label;
    std::vector<Regex> children;
  };
  explicit Regex(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Regex binary(Kind k, Regex l, Regex r);
  static Regex unary(Kind k, Regex t);

  std::shared_ptr<const Node> node_;
};

inline Regex Regex::epsilon() {
  static const Regex eps{std::make_shared<const Node>(Node{Kind::Epsilon, {}, {}})};
  return eps;
}
inline Regex Regex::symbol(Label label) {
  if (!is_valid_label(label)) throw Error("invalid label '" + label + "'");
  return Regex{std::make_shared<const Node>(Node{Kind::Symbol, std::move(label), {}})};
}
inline Regex Regex::binary(Kind k, Regex l, Regex r) {
  return Regex{std::make_shared<const Node>(Node{k, {}, {std::move(l), std::move(r)}})};
}
inline Regex Regex::unary(Kind k, Regex t) {
  return Regex{std::make_shared<const Node>(Node{k, {}, {std::move(t)}})};
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int regex_precedence(const Regex& t) {
  switch (t.kind()) {
    case Regex::Kind::Union: return 0;
    case Regex::Kind::Concat: return 1;
    case Regex::Kind::Star:
    case Regex::Kind::Plus: return 2;
    default: return 3;
  }
}

inline void print_regex_to(std::string& out, const Regex& t, int min_prec) {
  const int prec = regex_precedence(t);
  const bool paren = prec < min_prec;
  if (paren) out += "(";
  switch (t.kind()) {
    case Regex::Kind::Epsilon: out += "eps"; break;
    case Regex::Kind::Symbol: out += t.label(); break;
    case Regex::Kind::Union:
      print_regex_to(out, t.left(), 0);
      out += " | ";
      print_regex_to(out, t.right(), 1);
      break;
    case Regex::Kind::Concat:
      print_regex_to(out, t.left(), 1);
      out += " . ";
      print_regex_to(out, t.right(), 2);
      break;
    case Regex::Kind::Star:
      print_regex_to(out, t.inner(), 3);
      out += "*";
      break;
    case Regex::Kind::Plus:
      print_regex_to(out, t.inner(), 3);
      out += "+";
      break;
  }
  if (paren) out += ")";
}

}  // namespace detail

/// Renders in the surface grammar with the minimum parentheses needed to reparse to the same tree.
inline std::string print_regex(const Regex& t) {
  std::string out;
  detail::print_regex_to(out, t, 0);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Regex& t) { return os << print_regex(t); }

// ---------------------------------------------------------------------------
// Parsing
//
//   regex := alt
//   alt   := cat ("|" cat)*
//   cat   := post ("." post)*
//   post  := atom ("*" | "+" | "?")?
//   atom  := "eps" | LABEL | "(" regex ")"

namespace detail {

class RegexParser {
 public:
  explicit RegexParser(std::string_view text) : text_(text) {}

  Regex parse() {
    Regex r = alt();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "'|', '.', postfix operator or end of input");
    return r;
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

  Regex alt() {
    Regex r = cat();
    while (accept('|')) r = Regex::alt(std::move(r), cat());
    return r;
  }

  Regex cat() {
    Regex r = post();
    while (accept('.')) r = Regex::cat(std::move(r), post());
    return r;
  }

  Regex post() {
    Regex r = atom();
    if (accept('*')) return Regex::star(std::move(r));
    if (accept('+')) return Regex::plus(std::move(r));
    if (accept('?')) return Regex::alt(std::move(r), Regex::epsilon());
    return r;
  }

  Regex atom() {
    skip_ws();
    if (accept('(')) {
      Regex r = alt();
      if (!accept(')')) throw ParseError(pos_, "')'");
      return r;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) throw ParseError(pos_, "'eps', a label or '('");
    std::string word(text_.substr(start, pos_ - start));
    if (word == "eps") return Regex::epsilon();
    return Regex::symbol(std::move(word));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Regex parse_regex(std::string_view text) { return detail::RegexParser(text).parse(); }

// ---------------------------------------------------------------------------
// Structural queries

inline void collect_symbols(const Regex& t, std::set<Label>& out) {
  switch (t.kind()) {
    case Regex::Kind::Epsilon: return;
    case Regex::Kind::Symbol: out.insert(t.label()); return;
    case Regex::Kind::Star:
    case Regex::Kind::Plus: collect_symbols(t.inner(), out); return;
    case Regex::Kind::Union:
    case Regex::Kind::Concat:
      collect_symbols(t.left(), out);
      collect_symbols(t.right(), out);
      return;
  }
}

/// Labels occurring anywhere in `t`.
inline std::set<Label> sym(const Regex& t) {
  std::set<Label> out;
  collect_symbols(t, out);
  return out;
}

namespace detail {

// Returns false on the first violation; fills `syms` with sym(t) otherwise.
inline bool check_cf(const Regex& t, std::set<Label>& syms) {
  switch (t.kind()) {
    case Regex::Kind::Epsilon: return true;
    case Regex::Kind::Symbol: syms.insert(t.label()); return true;
    case Regex::Kind::Star:
    case Regex::Kind::Plus:
      if (!t.inner().is(Regex::Kind::Symbol)) return false;
      syms.insert(t.inner().label());
      return true;
    case Regex::Kind::Union:
    case Regex::Kind::Concat: {
      std::set<Label> l, r;
      if (!check_cf(t.left(), l) || !check_cf(t.right(), r)) return false;
      for (const auto& x : r) {
        if (l.count(x)) return false;
      }
      syms.merge(l);
      syms.merge(r);
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Single occurrence of every label, and repetition only directly over a label.
inline bool is_conflict_free(const Regex& t) {
  std::set<Label> syms;
  return detail::check_cf(t, syms);
}

inline void require_conflict_free(const Regex& t) {
  if (!is_conflict_free(t)) throw NotConflictFree("regex is not conflict-free: " + print_regex(t));
}

// ---------------------------------------------------------------------------
// Membership

namespace detail {

inline bool cf_matches(const LabelBag& bag, const Regex& t) {
  switch (t.kind()) {
    case Regex::Kind::Epsilon: return bag.empty();
    case Regex::Kind::Symbol: return bag.size() == 1 && bag.count(t.label()) == 1;
    case Regex::Kind::Star: {
      const Label& a = t.inner().label();
      return bag.counts().size() <= 1 && (bag.empty() || bag.count(a) > 0);
    }
    case Regex::Kind::Plus: {
      const Label& a = t.inner().label();
      return bag.counts().size() == 1 && bag.count(a) > 0;
    }
    case Regex::Kind::Union: return cf_matches(bag, t.left()) || cf_matches(bag, t.right());
    case Regex::Kind::Concat: {
      const std::set<Label> ls = sym(t.left());
      const std::set<Label> rs = sym(t.right());
      LabelBag lb, rb;
      for (const auto& [l, n] : bag.counts()) {
        if (ls.count(l))
          lb.add(l, n);
        else if (rs.count(l))
          rb.add(l, n);
        else
          return false;
      }
      return cf_matches(lb, t.left()) && cf_matches(rb, t.right());
    }
  }
  return false;
}

}  // namespace detail

/// Unordered-language membership for conflict-free regexes. Throws NotConflictFree otherwise.
inline bool bag_matches(const LabelBag& bag, const Regex& t) {
  require_conflict_free(t);
  return detail::cf_matches(bag, t);
}

namespace detail {

// Calls f(part) for every sub-bag `part` of `bag`.
inline void for_each_subbag(const LabelBag& bag, const std::function<bool(const LabelBag&)>& f) {
  std::vector<std::pair<Label, std::size_t>> items(bag.counts().begin(), bag.counts().end());
  std::vector<std::size_t> pick(items.size(), 0);
  while (true) {
    LabelBag part;
    for (std::size_t i = 0; i < items.size(); ++i) part.add(items[i].first, pick[i]);
    if (f(part)) return;
    std::size_t i = 0;
    while (i < items.size() && pick[i] == items[i].second) pick[i++] = 0;
    if (i == items.size()) return;
    ++pick[i];
  }
}

inline LabelBag bag_minus(LabelBag bag, const LabelBag& part) {
  for (const auto& [l, n] : part.counts()) bag.remove(l, n);
  return bag;
}

inline bool oracle_matches(const LabelBag& bag, const Regex& t) {
  switch (t.kind()) {
    case Regex::Kind::Epsilon: return bag.empty();
    case Regex::Kind::Symbol: return bag.size() == 1 && bag.count(t.label()) == 1;
    case Regex::Kind::Union: return oracle_matches(bag, t.left()) || oracle_matches(bag, t.right());
    case Regex::Kind::Concat: {
      bool found = false;
      for_each_subbag(bag, [&](const LabelBag& part) {
        found = oracle_matches(part, t.left()) && oracle_matches(bag_minus(bag, part), t.right());
        return found;
      });
      return found;
    }
    case Regex::Kind::Star: {
      if (bag.empty()) return true;
      // Peel off one non-empty iteration; at most bag.size() unfoldings.
      bool found = false;
      for_each_subbag(bag, [&](const LabelBag& part) {
        if (part.empty()) return false;
        found = oracle_matches(part, t.inner()) && oracle_matches(bag_minus(bag, part), t);
        return found;
      });
      return found;
    }
    case Regex::Kind::Plus: {
      const Regex rest = Regex::star(t.inner());
      bool found = false;
      for_each_subbag(bag, [&](const LabelBag& part) {
        found = oracle_matches(part, t.inner()) && oracle_matches(bag_minus(bag, part), rest);
        return found;
      });
      return found;
    }
  }
  return false;
}

}  // namespace detail

/// Membership by exhaustive bag splitting; works for any regex but is exponential.
inline bool bag_matches_oracle(const LabelBag& bag, const Regex& t, std::size_t bound = 8) {
  if (bag.size() > bound)
    throw BoundExceeded("bag of size " + std::to_string(bag.size()) + " exceeds oracle bound " +
                        std::to_string(bound));
  return detail::oracle_matches(bag, t);
}

// ---------------------------------------------------------------------------
// Disjunctive normal form

enum class Atom { One, Star, Plus };

inline const char* atom_suffix(Atom a) {
  switch (a) {
    case Atom::One: return "";
    case Atom::Star: return "*";
    case Atom::Plus: return "+";
  }
  return "";
}

/// Union-free CF clause; the empty map is epsilon.
using Clause = std::map<Label, Atom>;

inline bool clause_matches(const LabelBag& bag, const Clause& clause) {
  for (const auto& [l, n] : bag.counts()) {
    if (!clause.count(l)) return false;
  }
  for (const auto& [l, atom] : clause) {
    const std::size_t n = bag.count(l);
    if (atom == Atom::One && n != 1) return false;
    if (atom == Atom::Plus && n == 0) return false;
  }
  return true;
}

inline std::set<Label> clause_symbols(const Clause& c) {
  std::set<Label> out;
  for (const auto& [l, _] : c) out.insert(l);
  return out;
}

inline std::string print_clause(const Clause& c) {
  if (c.empty()) return "eps";
  std::string out;
  for (const auto& [l, atom] : c) {
    if (!out.empty()) out += " . ";
    out += l + atom_suffix(atom);
  }
  return out;
}

/// Sum of union-free clauses, kept sorted and duplicate-free.
struct DnfRegex {
  std::vector<Clause> clauses;

  bool matches(const LabelBag& bag) const {
    return std::any_of(clauses.begin(), clauses.end(),
                       [&](const Clause& c) { return clause_matches(bag, c); });
  }

  friend bool operator==(const DnfRegex&, const DnfRegex&) = default;
};

inline std::string print_dnf(const DnfRegex& d) {
  std::string out;
  for (const auto& c : d.clauses) {
    if (!out.empty()) out += " | ";
    out += d.clauses.size() > 1 && c.size() > 1 ? "(" + print_clause(c) + ")" : print_clause(c);
  }
  return out;
}

namespace detail {

inline std::vector<Clause> norm_clauses(const Regex& t) {
  switch (t.kind()) {
    case Regex::Kind::Epsilon: return {Clause{}};
    case Regex::Kind::Symbol: return {Clause{{t.label(), Atom::One}}};
    case Regex::Kind::Star: return {Clause{{t.inner().label(), Atom::Star}}};
    case Regex::Kind::Plus: return {Clause{{t.inner().label(), Atom::Plus}}};
    case Regex::Kind::Union: {
      auto l = norm_clauses(t.left());
      auto r = norm_clauses(t.right());
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case Regex::Kind::Concat: {
      const auto l = norm_clauses(t.left());
      const auto r = norm_clauses(t.right());
      std::vector<Clause> out;
      out.reserve(l.size() * r.size());
      for (const auto& a : l) {
        for (const auto& b : r) {
          Clause c = a;
          c.insert(b.begin(), b.end());
          out.push_back(std::move(c));
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace detail

/// Distributes concatenation over union. Requires a conflict-free regex.
inline DnfRegex norm(const Regex& t) {
  require_conflict_free(t);
  DnfRegex d{detail::norm_clauses(t)};
  std::sort(d.clauses.begin(), d.clauses.end());
  d.clauses.erase(std::unique(d.clauses.begin(), d.clauses.end()), d.clauses.end());
  return d;
}

}  // namespace gschema
