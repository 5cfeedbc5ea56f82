#pragma once

#include <stdexcept>
#include <string>

namespace nozzlelog {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EmptyLogError : public Error {
public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class SchemaError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class GenerationError : public Error {
public:
  using Error::Error;
};

class SelectorError : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  using Error::Error;
};

class EvalError : public Error {
public:
  using Error::Error;
};

class RuleConfigError : public Error {
public:
  using Error::Error;
};

class UnsupportedModelError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

}  // namespace nozzlelog
