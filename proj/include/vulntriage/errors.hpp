#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vulntriage {

/// Base class for every error this library raises on bad input or bad
/// configuration. Anything escaping that is not an Error is a bug.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// CVSS vector text could not be parsed.
class VectorError : public Error {
public:
  enum class Kind { MissingMetric, DuplicateMetric, UnknownValue, MalformedSyntax };

  VectorError(Kind kind, std::string token, const std::string& message)
      : Error(message), kind_(kind), token_(std::move(token)) {}

  Kind kind() const { return kind_; }
  /// The metric key or offending token the error refers to.
  const std::string& token() const { return token_; }

private:
  Kind kind_;
  std::string token_;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Input file violates the documented schema. Carries the index of the
/// offending entry where one exists.
class SchemaError : public Error {
public:
  SchemaError(std::size_t entry_index, const std::string& message)
      : Error(message), entry_index_(entry_index) {}
  std::size_t entry_index() const { return entry_index_; }

private:
  std::size_t entry_index_;
};

/// Bad row in a line-oriented input file (1-based line number).
class RowError : public Error {
public:
  RowError(std::size_t line, const std::string& message)
      : Error(message), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class InvalidConfig : public Error {
public:
  using Error::Error;
};

/// An attack count of zero has no attack-potential measure; the
/// vulnerability must be treated as unexploited instead.
class ZeroAttacks : public Error {
public:
  ZeroAttacks() : Error("attack count is zero; no attack-potential measure exists") {}
};

class NegativeValue : public Error {
public:
  using Error::Error;
};

/// A contingency table row is empty, so treated/untreated risk is undefined.
class UndefinedRisk : public Error {
public:
  using Error::Error;
};

class AllIterationsUndefined : public Error {
public:
  AllIterationsUndefined()
      : Error("risk reduction was undefined in every bootstrap iteration") {}
};

}  // namespace vulntriage
