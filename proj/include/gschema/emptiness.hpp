#pragma once

// Encoding of schema emptiness as a homogeneous system of linear diophantine
// equations: one variable per element (how many nodes of that type), one
// equation per label (edges emitted minus edges received), and one parameter
// per repetition occurrence.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gschema/element.hpp"
#include "gschema/error.hpp"
#include "gschema/rex.hpp"

namespace gschema {

struct DioTerm {
  std::int64_t coefficient;
  std::size_t variable;
  /// Indices into DioSystem::parameters, ascending. Empty for a constant coefficient.
  std::vector<std::size_t> parameters;
};

struct DioEquation {
  Label label;
  std::vector<DioTerm> terms;
};

struct DioSystem {
  std::vector<std::string> variables;
  std::vector<std::string> parameters;
  std::vector<DioEquation> equations;

  bool parametric() const { return !parameters.empty(); }
};

namespace detail {

inline std::vector<std::string> variable_names(std::size_t n) {
  static const char* const short_names[] = {"x", "y", "z"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(n <= 3 ? short_names[i] : "x" + std::to_string(i + 1));
  return out;
}

struct Repetition {
  std::size_t depth;
  std::size_t element;
  int side;  // 0 = in, 1 = out
  std::size_t position;
  const void* node;
};

class SystemBuilder {
 public:
  explicit SystemBuilder(std::span<const SchemaElement> elements) : elements_(elements) {}

  DioSystem build() {
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      collect_repetitions(elements_[k].in, k, 0, 0);
      collect_repetitions(elements_[k].out, k, 1, 0);
    }
    // Outer repetitions are numbered before nested ones, then by element, side and position.
    std::sort(reps_.begin(), reps_.end(), [](const Repetition& a, const Repetition& b) {
      return std::tie(a.depth, a.element, a.side, a.position) < std::tie(b.depth, b.element, b.side, b.position);
    });
    DioSystem sys;
    sys.variables = variable_names(elements_.size());
    for (std::size_t i = 0; i < reps_.size(); ++i) {
      sys.parameters.push_back("h" + std::to_string(i + 1));
      param_of_.emplace(std::tuple{reps_[i].element, reps_[i].side, reps_[i].node}, i);
    }
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      accumulate(elements_[k].in, k, 0, -1, {});
      accumulate(elements_[k].out, k, 1, +1, {});
    }
    for (auto& [label, terms] : coefficients_) {
      DioEquation eq{label, {}};
      for (const auto& [key, c] : terms) {
        if (c != 0) eq.terms.push_back({c, key.first, key.second});
      }
      sys.equations.push_back(std::move(eq));
    }
    return sys;
  }

 private:
  void collect_repetitions(const Regex& t, std::size_t element, int side, std::size_t depth) {
    switch (t.kind()) {
      case Regex::Kind::Union:
        throw UnsupportedSystem("element '" + elements_[element].name +
                                "' uses union; encode each normalised entry combination separately");
      case Regex::Kind::Concat:
        collect_repetitions(t.left(), element, side, depth);
        collect_repetitions(t.right(), element, side, depth);
        return;
      case Regex::Kind::Star:
      case Regex::Kind::Plus:
        reps_.push_back({depth, element, side, position_++, &t.inner()});
        collect_repetitions(t.inner(), element, side, depth + 1);
        return;
      default: return;
    }
  }

  void accumulate(const Regex& t, std::size_t element, int side, std::int64_t sign,
                  std::vector<std::size_t> params) {
    switch (t.kind()) {
      case Regex::Kind::Epsilon: return;
      case Regex::Kind::Symbol: {
        std::sort(params.begin(), params.end());
        coefficients_[t.label()][{element, params}] += sign;
        return;
      }
      case Regex::Kind::Concat:
        accumulate(t.left(), element, side, sign, params);
        accumulate(t.right(), element, side, sign, params);
        return;
      case Regex::Kind::Star:
      case Regex::Kind::Plus:
        params.push_back(param_of_.at(std::tuple{element, side, static_cast<const void*>(&t.inner())}));
        accumulate(t.inner(), element, side, sign, std::move(params));
        return;
      case Regex::Kind::Union: return;
    }
  }

  std::span<const SchemaElement> elements_;
  std::vector<Repetition> reps_;
  std::size_t position_ = 0;
  std::map<std::tuple<std::size_t, int, const void*>, std::size_t> param_of_;
  std::map<Label, std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::int64_t>> coefficients_;
};

}  // namespace detail

/// Builds the per-label balance equations. Regexes may be non-conflict-free but must be
/// union-free; repeated occurrences of a label add up (a . c . c gives coefficient 2 for c).
inline DioSystem build_system(std::span<const SchemaElement> elements) {
  return detail::SystemBuilder(elements).build();
}

inline DioSystem build_system(const GraphSchema& s) { return build_system(s.elements()); }

/// One line per equation, "label: terms = 0". Parametric systems spell products with '*'.
inline std::string render_system(const DioSystem& sys) {
  const std::string times = sys.parametric() ? "*" : "";
  std::string out;
  for (const auto& eq : sys.equations) {
    if (!out.empty()) out += "\n";
    out += eq.label + ": ";
    if (eq.terms.empty()) out += "0";
    for (std::size_t i = 0; i < eq.terms.size(); ++i) {
      const DioTerm& t = eq.terms[i];
      const std::int64_t mag = t.coefficient < 0 ? -t.coefficient : t.coefficient;
      if (i == 0)
        out += t.coefficient < 0 ? "-" : "";
      else
        out += t.coefficient < 0 ? " - " : " + ";
      std::string factors;
      for (std::size_t p : t.parameters) factors += (factors.empty() ? "" : times) + sys.parameters[p];
      factors += (factors.empty() ? "" : times) + sys.variables[t.variable];
      if (mag != 1) out += std::to_string(mag) + times;
      out += factors;
    }
    out += " = 0";
  }
  return out;
}

/// Evaluates every equation at the given variable (and parameter) values.
inline bool satisfies(const DioSystem& sys, std::span<const std::uint64_t> values,
                      std::span<const std::uint64_t> parameter_values = {}) {
  if (values.size() != sys.variables.size()) return false;
  if (sys.parametric() && parameter_values.size() != sys.parameters.size()) return false;
  for (const auto& eq : sys.equations) {
    std::int64_t sum = 0;
    for (const auto& t : eq.terms) {
      std::int64_t v = t.coefficient * static_cast<std::int64_t>(values[t.variable]);
      for (std::size_t p : t.parameters) v *= static_cast<std::int64_t>(parameter_values[p]);
      sum += v;
    }
    if (sum != 0) return false;
  }
  return true;
}

using Solution = std::vector<std::uint64_t>;

/// Lexicographically first non-trivial solution with every value in [0, bound], if any.
/// Throws UnsupportedSystem on a parametric system.
inline std::optional<Solution> solve_star_free(const DioSystem& sys, std::uint64_t bound) {
  if (sys.parametric()) throw UnsupportedSystem("parametric systems are not decided");
  const std::size_t n = sys.variables.size();
  if (n == 0 || bound == 0) return std::nullopt;

  // Dense coefficients, and per equation the reachable range of the suffix sums.
  const std::size_t m = sys.equations.size();
  std::vector<std::vector<std::int64_t>> coef(m, std::vector<std::int64_t>(n, 0));
  for (std::size_t e = 0; e < m; ++e) {
    for (const auto& t : sys.equations[e].terms) coef[e][t.variable] += t.coefficient;
  }
  const auto b = static_cast<std::int64_t>(bound);
  std::vector<std::vector<std::int64_t>> lo(m, std::vector<std::int64_t>(n + 1, 0));
  std::vector<std::vector<std::int64_t>> hi(m, std::vector<std::int64_t>(n + 1, 0));
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t v = n; v-- > 0;) {
      lo[e][v] = lo[e][v + 1] + std::min<std::int64_t>(0, coef[e][v] * b);
      hi[e][v] = hi[e][v + 1] + std::max<std::int64_t>(0, coef[e][v] * b);
    }
  }

  Solution values(n, 0);
  std::vector<std::int64_t> partial(m, 0);
  std::optional<Solution> found;

  auto search = [&](auto&& self, std::size_t v, bool nonzero) -> bool {
    if (v == n) {
      if (!nonzero) return false;
      for (std::size_t e = 0; e < m; ++e) {
        if (partial[e] != 0) return false;
      }
      found = values;
      return true;
    }
    for (std::int64_t x = 0; x <= b; ++x) {
      bool feasible = true;
      for (std::size_t e = 0; e < m; ++e) {
        const std::int64_t s = partial[e] + coef[e][v] * x;
        if (s + lo[e][v + 1] > 0 || s + hi[e][v + 1] < 0) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      for (std::size_t e = 0; e < m; ++e) partial[e] += coef[e][v] * x;
      values[v] = static_cast<std::uint64_t>(x);
      const bool done = self(self, v + 1, nonzero || x != 0);
      for (std::size_t e = 0; e < m; ++e) partial[e] -= coef[e][v] * x;
      values[v] = 0;
      if (done) return true;
    }
    return false;
  };
  search(search, 0, false);
  return found;
}

enum class EmptinessVerdict { Nonempty, NoSolutionWithinBound, UndecidedParametric };

inline const char* emptiness_verdict_name(EmptinessVerdict v) {
  switch (v) {
    case EmptinessVerdict::Nonempty: return "NONEMPTY";
    case EmptinessVerdict::NoSolutionWithinBound: return "NO_SOLUTION_WITHIN_BOUND";
    case EmptinessVerdict::UndecidedParametric: return "UNDECIDED_PARAMETRIC";
  }
  return "?";
}

struct EmptinessResult {
  DioSystem system;
  EmptinessVerdict verdict;
  std::optional<Solution> certificate;
};

inline EmptinessResult analyze_emptiness(std::span<const SchemaElement> elements, std::uint64_t bound = 16) {
  EmptinessResult r{build_system(elements), EmptinessVerdict::UndecidedParametric, std::nullopt};
  if (r.system.parametric()) return r;
  r.certificate = solve_star_free(r.system, bound);
  r.verdict = r.certificate ? EmptinessVerdict::Nonempty : EmptinessVerdict::NoSolutionWithinBound;
  return r;
}

}  // namespace gschema
