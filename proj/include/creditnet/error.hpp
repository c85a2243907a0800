#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace creditnet {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Row numbers are 1-based and count the header row.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& what)
      : Error("row " + std::to_string(row) + ", column '" + column + "': " + what),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// A quantity whose definition breaks down on the given input
// (zero variance, zero edges, degree-regular graph, ...).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace creditnet
