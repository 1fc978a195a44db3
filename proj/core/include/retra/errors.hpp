#pragma once

#include <stdexcept>
#include <string>

namespace retra {

// Raised when a computation would exceed a configured degree, order or size cap.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised for malformed text input (group, complex, presentation or block files).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace retra
