#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace s5p {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input record. `line()` is 1-based for text input and the
/// record number for binary input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::uint64_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::uint64_t line() const noexcept { return line_; }

 private:
  std::uint64_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the domain where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Internal invariant broken, e.g. an edge endpoint without a cluster.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Brute-force search refused because the instance is too large.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace s5p
