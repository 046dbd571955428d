#include "epidrive/error.hpp"

#include <fmt/format.h>

namespace epidrive {

const char* category_name(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::config: return "configuration error";
    case ErrorCategory::numeric_input: return "numeric input error";
    case ErrorCategory::degenerate_ratio: return "degenerate ratio";
    case ErrorCategory::step_size: return "step size error";
    case ErrorCategory::divergence: return "divergence";
    case ErrorCategory::inference: return "inference error";
    case ErrorCategory::defuzzification: return "defuzzification error";
    case ErrorCategory::parse: return "parse error";
    case ErrorCategory::validation: return "validation error";
    case ErrorCategory::io: return "I/O error";
  }
  return "error";
}

ParseError::ParseError(const std::string& source, int line, int column,
                       const std::string& message)
    : Error(ErrorCategory::parse,
            fmt::format("{}:{}:{}: {}", source, line, column, message)),
      line_(line),
      column_(column) {}

DivergenceError::DivergenceError(double time, const std::string& message)
    : Error(ErrorCategory::divergence,
            fmt::format("t={:.6f} s: {}", time, message)),
      time_(time) {}

}  // namespace epidrive
