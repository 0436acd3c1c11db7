#pragma once

#include <stdexcept>
#include <string>

namespace dexarb {

// Base for every error raised by the library. Subclasses let callers map
// failures onto exit codes (data problems vs. configuration problems).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnknownTokenError : public Error {
 public:
  using Error::Error;
};

class RejectedPoolError : public Error {
 public:
  using Error::Error;
};

class PriceMissingError : public Error {
 public:
  using Error::Error;
};

class CorruptionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace dexarb
