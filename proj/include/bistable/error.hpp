#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bistable {

/// Library error carrying a stable machine-readable code ("type-error",
/// "enumeration-budget-exceeded", ...) alongside the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error("[" + code + "] " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bistable
