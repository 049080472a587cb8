#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semviz {

// Broad failure classes. The CLI maps these onto exit codes and the
// channel maps them onto HTTP status classes.
enum class ErrorKind {
  kInvalid,        // bad arguments or violated preconditions
  kNotFound,       // unknown template, element, prefix, subject
  kNetwork,        // fetch failures
  kParse,          // RDF, template or config syntax errors
  kDepthExceeded,  // nested template expansion went past the limit
  kConflict,       // duplicate registration
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error(ErrorKind::kInvalid, message) {}
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& message)
      : Error(ErrorKind::kNotFound, message) {}
};

class NetworkError : public Error {
 public:
  explicit NetworkError(const std::string& message)
      : Error(ErrorKind::kNetwork, message) {}
};

class DepthExceeded : public Error {
 public:
  explicit DepthExceeded(const std::string& message)
      : Error(ErrorKind::kDepthExceeded, message) {}
};

class Conflict : public Error {
 public:
  explicit Conflict(const std::string& message)
      : Error(ErrorKind::kConflict, message) {}
};

// Syntax error with a position. Line and column are 1-based; offset is the
// 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             std::size_t offset)
      : Error(ErrorKind::kParse, format(message, line, column)),
        line_(line),
        column_(column),
        offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
  std::size_t offset_;
};

}  // namespace semviz
