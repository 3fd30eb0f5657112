#pragma once

#include <stdexcept>
#include <string>

namespace supsat {

// Malformed or ill-sorted input. Line/column are 1-based; 0 when not tied to a position.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                    : message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

class SortError : public InputError {
 public:
  using InputError::InputError;
};

// A configured wall-clock or size cap was hit. Never a verdict.
class ResourceExceeded : public std::runtime_error {
 public:
  enum class Kind { Timeout, Memory };
  ResourceExceeded(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace supsat
