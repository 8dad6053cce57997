#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ktree {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally invalid input: self-loops, multi-edges, non-clique attachments.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// Text that does not follow the .ktc grammar.
class ParseError : public MalformedInput {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : MalformedInput("line " + std::to_string(line) + ", column " + std::to_string(column) +
                       ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// An enumeration or generation budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A caller-supplied argument is outside the operation's domain (e.g. a scope
// naming a non-clique, a family size below k).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ktree
