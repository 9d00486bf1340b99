#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qaoa {

/// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by the text-format loaders; carries the 1-based line (0 if not line-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = "")
      : std::runtime_error(format(line, message, source)), line_(line), detail_(message) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(std::size_t line, const std::string& message, const std::string& source) {
    std::string where = source;
    if (line > 0) where += source.empty() ? "line " + std::to_string(line) : ":" + std::to_string(line);
    return where.empty() ? message : where + ": " + message;
  }

  std::size_t line_;
  std::string detail_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace qaoa
