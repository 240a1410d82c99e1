#pragma once

#include <stdexcept>
#include <string>

namespace bmatch {

/// Malformed input: dimension mismatch, acceptance-pattern mismatch,
/// marks that fail validation where a valid matrix is required.
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// An argument outside an operation's domain (unacceptable peer,
/// quota below one, non-blocking pair passed to apply_pair, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A file that cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A file or stream that does not follow one of the documented formats.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bmatch
