#pragma once

#include <stdexcept>
#include <string>

namespace qdock {

// Base class for every domain failure reported by the library. The CLI maps
// these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, QUBO coordinate files, sample files).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A well-formed document that violates a domain invariant. `field` names the
// offending field so callers can tell violations apart.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// More ligand atoms than grid points: no injective pose exists.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Two points closer than the coincidence tolerance where a 1/r term is needed.
class CoincidentPointError : public Error {
 public:
  using Error::Error;
};

class NoValidSolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdock
