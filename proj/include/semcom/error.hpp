#pragma once

#include <stdexcept>
#include <string>

namespace semcom {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to an operation (bad dimensions, empty input, d <= 0, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed corpus or config text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Well-formed input that violates a schema rule (duplicate id, relation arity, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during policy optimization (non-finite gradient etc).
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive search refused because the instance is too large.
class InstanceSizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace semcom
