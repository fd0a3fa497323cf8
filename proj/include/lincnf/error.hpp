#pragma once

#include <stdexcept>
#include <string>

namespace lincnf {

// Base of every error the library throws. Subclasses carry the category the
// command-line layer maps onto exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Caller handed in something that violates a documented precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// A configurable cap (variables, vertices, bits, clause count) was exceeded.
class CapExceeded : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace lincnf
