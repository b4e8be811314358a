#pragma once

#include <stdexcept>
#include <string>

namespace homogenlab {

// Raised whenever an operation rejects its input (bad dimensions, violated
// preconditions, malformed documents). `code` is a short machine-readable tag
// such as "dimension_mismatch"; what() carries the human-readable detail.
class InputError : public std::invalid_argument {
 public:
  InputError(std::string code, const std::string& message)
      : std::invalid_argument(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void reject(std::string code, const std::string& message) {
  throw InputError(std::move(code), message);
}

inline void require(bool condition, const char* code, const std::string& message) {
  if (!condition) reject(code, message);
}

}  // namespace homogenlab
