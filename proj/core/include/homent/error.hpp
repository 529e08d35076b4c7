#pragma once

#include <stdexcept>
#include <string>

namespace homent {

enum class ErrorKind {
  ZeroState,
  BadWeights,
  Range,
  Division,
  Unidentifiable,
  DependentAngleSets,
  Singular,
  Consistency,
  NoConvergence,
  EmptySubspace,
  Physicality,
  DimensionMismatch,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind is
/// stable and intended for programmatic dispatch; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input file. Line and column are 1-based; column 0 means the
/// whole line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what)
      : Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ":" +
                                    std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace homent
