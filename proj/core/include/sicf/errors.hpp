#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sicf {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A record is missing a required field or has the wrong type.
class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Records are individually well-formed but violate a corpus invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

/// A file-backed provider has no record for the requested key.
class LookupError : public Error {
 public:
  explicit LookupError(std::string key);
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// improved_ratio() with pseudo-oracle score equal to the initial score.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MissingFileError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace sicf
