#pragma once

#include <stdexcept>
#include <string>

namespace epidrive {

// Numeric values double as CLI exit codes.
enum class ErrorCategory : int {
  config = 3,
  numeric_input = 4,
  degenerate_ratio = 5,
  step_size = 6,
  divergence = 7,
  inference = 8,
  defuzzification = 9,
  parse = 10,
  validation = 11,
  io = 12,
};

const char* category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, int column,
             const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& field, const std::string& message)
      : Error(ErrorCategory::validation, field + ": " + message),
        field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& message);

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace epidrive
