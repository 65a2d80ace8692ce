#pragma once

// Type inference for path queries: a query is typed by the set of
// (source element, target element) pairs its results can connect on any
// graph conforming to the schema.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gschema/bit_relation.hpp"
#include "gschema/element.hpp"
#include "gschema/error.hpp"
#include "gschema/query.hpp"
#include "gschema/schema.hpp"

namespace gschema {

/// Element names a PairSet ranges over.
using ElementUniverse = std::shared_ptr<const std::vector<std::string>>;

inline ElementUniverse universe_of(const GraphSchema& s) {
  auto names = std::make_shared<std::vector<std::string>>();
  for (const auto& e : s) names->push_back(e.name);
  return names;
}

/// Set of ordered element pairs over a fixed schema.
class PairSet {
 public:
  explicit PairSet(ElementUniverse universe)
      : universe_(std::move(universe)), rel_(universe_->size()) {}
  PairSet(ElementUniverse universe, BitRelation rel) : universe_(std::move(universe)), rel_(std::move(rel)) {}

  static PairSet identity(ElementUniverse u) {
    const std::size_t n = u->size();
    return PairSet(std::move(u), BitRelation::identity(n));
  }

  const ElementUniverse& universe() const { return universe_; }
  const BitRelation& relation() const { return rel_; }
  std::size_t element_count() const { return universe_->size(); }

  bool empty() const { return rel_.empty(); }
  std::size_t size() const { return rel_.count(); }
  bool contains(std::size_t i, std::size_t j) const { return rel_.test(i, j); }
  bool contains(const std::string& a, const std::string& b) const { return contains(index(a), index(b)); }
  void insert(std::size_t i, std::size_t j) { rel_.set(i, j); }
  void insert(const std::string& a, const std::string& b) { insert(index(a), index(b)); }

  /// Pairs as element names, sorted lexicographically.
  std::vector<std::pair<std::string, std::string>> named_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [i, j] : rel_.pairs()) out.emplace_back((*universe_)[i], (*universe_)[j]);
    std::sort(out.begin(), out.end());
    return out;
  }

  void require_same_schema(const PairSet& o) const {
    if (universe_ != o.universe_ && *universe_ != *o.universe_)
      throw SchemaMismatch("pair sets range over different schemas");
  }

  PairSet& operator|=(const PairSet& o) {
    require_same_schema(o);
    rel_ |= o.rel_;
    return *this;
  }
  PairSet& operator&=(const PairSet& o) {
    require_same_schema(o);
    rel_ &= o.rel_;
    return *this;
  }
  friend PairSet operator|(PairSet a, const PairSet& b) { return a |= b; }
  friend PairSet operator&(PairSet a, const PairSet& b) { return a &= b; }

  friend bool operator==(const PairSet& a, const PairSet& b) {
    return *a.universe_ == *b.universe_ && a.rel_ == b.rel_;
  }

 private:
  std::size_t index(const std::string& name) const {
    auto it = std::find(universe_->begin(), universe_->end(), name);
    if (it == universe_->end()) throw UnknownName("unknown schema element '" + name + "'");
    return static_cast<std::size_t>(it - universe_->begin());
  }

  ElementUniverse universe_;
  BitRelation rel_;
};

/// {(a,c) | ∃b. (a,b) ∈ x ∧ (b,c) ∈ y}.
inline PairSet compose(const PairSet& x, const PairSet& y) {
  x.require_same_schema(y);
  return PairSet(x.universe(), compose(x.relation(), y.relation()));
}

/// ⋃_{i≥0} Eⁱ by Warshall's algorithm, with E⁰ the identity over every element.
inline PairSet reflexive_transitive_closure(const PairSet& e) {
  const std::size_t n = e.element_count();
  BitRelation r = e.relation() | BitRelation::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (r.test(i, k)) r.merge_row(i, k);
    }
  }
  return PairSet(e.universe(), std::move(r));
}

namespace detail {

inline BitRelation power_by_squaring(BitRelation base, std::uint64_t exp) {
  BitRelation result = BitRelation::identity(base.dimension());
  while (exp) {
    if (exp & 1U) result = compose(result, base);
    exp >>= 1U;
    if (exp) base = compose(base, base);
  }
  return result;
}

}  // namespace detail

/// ⋃_{i=m}^{n} Eⁱ, computed as Eᵐ ∘ (I ∪ E)ⁿ⁻ᵐ with both powers by repeated squaring.
inline PairSet bounded_closure(const PairSet& e, std::uint64_t m, std::uint64_t n) {
  if (n < m) throw Error("bounded closure with n < m");
  const std::size_t dim = e.element_count();
  const BitRelation low = detail::power_by_squaring(e.relation(), m);
  const BitRelation span = detail::power_by_squaring(e.relation() | BitRelation::identity(dim), n - m);
  return PairSet(e.universe(), compose(low, span));
}

// ---------------------------------------------------------------------------
// Inference

namespace detail {

class Inferencer {
 public:
  explicit Inferencer(const GraphSchema& s) : s_(s), universe_(universe_of(s)) {}

  PairSet infer(const Query& q) const {
    switch (q.kind()) {
      case Query::Kind::Eps: return PairSet::identity(universe_);
      case Query::Kind::Fwd: return label_pairs(q.label(), false);
      case Query::Kind::Bwd: return label_pairs(q.label(), true);
      case Query::Kind::Any: {
        PairSet r(universe_);
        for (std::size_t i = 0; i < s_.size(); ++i) {
          for (std::size_t j = 0; j < s_.size(); ++j) {
            if (intersects(s_.out_symbols(i), s_.in_symbols(j))) r.insert(i, j);
          }
        }
        return r;
      }
      case Query::Kind::Union: return infer(q.left()) | infer(q.right());
      case Query::Kind::Inter: return infer(q.left()) & infer(q.right());
      case Query::Kind::Concat: return compose(infer(q.left()), infer(q.right()));
      case Query::Kind::Star: return reflexive_transitive_closure(infer(q.inner()));
      case Query::Kind::Count: return bounded_closure(infer(q.inner()), q.min(), q.max());
      case Query::Kind::Test: {
        const PairSet inner = infer(q.inner());
        const std::vector<std::size_t> first = inner.relation().domain();
        PairSet r(universe_);
        for (std::size_t i : first) {
          for (std::size_t j : first) r.insert(i, j);
        }
        return r;
      }
    }
    return PairSet(universe_);
  }

 private:
  PairSet label_pairs(const Label& a, bool backward) const {
    PairSet r(universe_);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const bool src = backward ? s_.in_symbols(i).count(a) : s_.out_symbols(i).count(a);
      if (!src) continue;
      for (std::size_t j = 0; j < s_.size(); ++j) {
        const bool dst = backward ? s_.out_symbols(j).count(a) : s_.in_symbols(j).count(a);
        if (dst) r.insert(i, j);
      }
    }
    return r;
  }

  static bool intersects(const std::set<Label>& x, const std::set<Label>& y) {
    return std::any_of(x.begin(), x.end(), [&](const Label& l) { return y.count(l) > 0; });
  }

  const GraphSchema& s_;
  ElementUniverse universe_;
};

}  // namespace detail

/// Upper bound on the element pairs ⟦q⟧ can relate on any graph conforming to `s`.
inline PairSet infer(const GraphSchema& s, const Query& q) { return detail::Inferencer(s).infer(q); }

// ---------------------------------------------------------------------------
// Satisfiability

enum class Verdict { Sat, Unsat, UnknownNonempty };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::UnknownNonempty: return "UNKNOWN_NONEMPTY";
  }
  return "?";
}

struct SatVerdict {
  Verdict verdict;
  PairSet evidence;
};

/// Empty inference proves unsatisfiability for every language; a non-empty one proves
/// satisfiability only for RPQs. Throws SchemaError unless `s` passes every gate.
inline SatVerdict sat(const GraphSchema& s, const Query& q) {
  if (!check_well_formed(s).accepted()) throw SchemaError("satisfiability requires a well-formed schema");
  PairSet e = infer(s, q);
  Verdict v = Verdict::Unsat;
  if (!e.empty()) v = language_class(q) == Language::Rpq ? Verdict::Sat : Verdict::UnknownNonempty;
  return {v, std::move(e)};
}

}  // namespace gschema
