#pragma once

#include <stdexcept>
#include <string>

namespace regowl {

/// Base of every error raised by the pipeline. `code()` is a stable
/// machine-readable identifier such as "DanglingReference".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace regowl
