#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsym {

enum class ErrorKind {
  Input,       // malformed text, bad arguments
  Size,        // a configured cap was exceeded
  Validation,  // well-formed but violates a precondition
  Missing,     // lookup of an unassigned variable
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorKind::Input, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorKind::Size, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::Validation, what) {}
};

class MissingAssignmentError : public Error {
 public:
  explicit MissingAssignmentError(int var)
      : Error(ErrorKind::Missing,
              "variable " + std::to_string(var) + " is not assigned"),
        var_(var) {}

  int variable() const noexcept { return var_; }

 private:
  int var_;
};

}  // namespace qsym
