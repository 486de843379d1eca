#pragma once

#include <stdexcept>
#include <string>

namespace coevo {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A GameParameters or RunConfig invariant does not hold.
class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when an integration step leaves the unit cube by more than the
/// clamping tolerance; the step size is too large for the vector field.
class StepInstability : public Error {
 public:
  using Error::Error;
};

class UnsupportedScenario : public Error {
 public:
  using Error::Error;
};

/// Malformed config text. Carries the 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownKey : public Error {
 public:
  explicit UnknownKey(const std::string& key)
      : Error("unknown config key '" + key + "'"), key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace coevo
