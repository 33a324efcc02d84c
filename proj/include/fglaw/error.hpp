#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fglaw {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different coefficient rings or have different shapes.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured size bound.
class BoundError : public Error {
 public:
  BoundError(const std::string& what, std::size_t size)
      : Error(what + " (size " + std::to_string(size) + ")"), size_(size) {}
  std::size_t size() const noexcept { return size_; }

 private:
  std::size_t size_;
};

/// Malformed textual input; `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace fglaw
