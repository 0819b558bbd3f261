#pragma once

#include <stdexcept>
#include <string>

namespace k2t {

// Base of every error raised by the library. The concrete type tells the
// caller which contract was violated.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Position or ID outside the valid domain of a structure.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Lookup of something that does not exist (select past the last 1, unknown term).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Malformed build input (cell outside the matrix, ID outside the dictionary).
class InputError : public Error {
 public:
  using Error::Error;
};

// Corrupt, truncated or foreign serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Operation not valid for the current object state (descending a leaf).
class StateError : public Error {
 public:
  using Error::Error;
};

// Query shape the engine does not support (class I joins).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Join strategy not applicable to the join class.
class StrategyError : public Error {
 public:
  using Error::Error;
};

// N-Triples or query-text syntax error.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace k2t
