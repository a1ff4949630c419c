#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace explorank {

/// Base of every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data. `line()` is 1-based, 0 when not tied to a line.
class LoadError : public Error {
 public:
  LoadError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The request is well-formed but cannot be served in the current session state
/// (interest ranking on a cold profile).
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// Precomputed data does not belong to the graph or binnings it is used with.
class IndexMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace explorank
