#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gschema/error.hpp"
#include "gschema/rex.hpp"

namespace gschema {

/// Constraint on a node's incoming and outgoing edge bags.
struct SchemaElement {
  std::string name;
  Regex in;
  Regex out;
};

/// Ordered set of uniquely named elements whose regexes are all conflict-free.
///
/// Construction enforces the conflict-free gate and name uniqueness only; the
/// schema conditions and well-formedness are reported by `check_well_formed`.
class GraphSchema {
 public:
  GraphSchema() = default;

  explicit GraphSchema(std::vector<SchemaElement> elements) : elements_(std::move(elements)) {
    std::set<std::string> seen;
    for (const auto& e : elements_) {
      if (e.name.empty()) throw SchemaError("schema element with empty name");
      if (!seen.insert(e.name).second) throw SchemaError("duplicate schema element '" + e.name + "'");
      if (!is_conflict_free(e.in))
        throw NotConflictFree("element '" + e.name + "': in regex is not conflict-free: " + print_regex(e.in));
      if (!is_conflict_free(e.out))
        throw NotConflictFree("element '" + e.name + "': out regex is not conflict-free: " + print_regex(e.out));
      in_syms_.push_back(sym(e.in));
      out_syms_.push_back(sym(e.out));
    }
  }

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const SchemaElement& operator[](std::size_t i) const { return elements_[i]; }
  std::span<const SchemaElement> elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  const std::set<Label>& in_symbols(std::size_t i) const { return in_syms_[i]; }
  const std::set<Label>& out_symbols(std::size_t i) const { return out_syms_[i]; }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i].name == name) return i;
    }
    return std::nullopt;
  }

  std::size_t index_of(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw UnknownName("unknown schema element '" + name + "'");
  }

  /// Every label used by some element.
  std::set<Label> alphabet() const {
    std::set<Label> out;
    for (std::size_t i = 0; i < size(); ++i) {
      out.insert(in_syms_[i].begin(), in_syms_[i].end());
      out.insert(out_syms_[i].begin(), out_syms_[i].end());
    }
    return out;
  }

 private:
  std::vector<SchemaElement> elements_;
  std::vector<std::set<Label>> in_syms_;
  std::vector<std::set<Label>> out_syms_;
};

}  // namespace gschema
