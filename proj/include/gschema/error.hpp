#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gschema {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a regex or query string.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected)
      : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// An operation that requires a conflict-free regex received one that is not.
class NotConflictFree : public Error {
 public:
  using Error::Error;
};

/// The bounded membership oracle was asked about a bag above its size bound.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// Lookup of a node or element name that does not exist.
class UnknownName : public Error {
 public:
  using Error::Error;
};

/// A query uses a construct outside the requested language.
class LanguageViolation : public Error {
 public:
  using Error::Error;
};

/// Pair sets built over different schemas were combined.
class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed graph or schema document, or a structural invariant violation on load.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A schema failed one of the load-time or well-formedness gates.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The diophantine encoding does not support the given input.
class UnsupportedSystem : public Error {
 public:
  using Error::Error;
};

/// The witness builder could not satisfy a per-label degree constraint.
class AssignmentInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace gschema
