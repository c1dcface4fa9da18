#pragma once

#include <stdexcept>
#include <string>

namespace hrtfup {

// Error categories mirror the process exit codes used by the CLI:
// invalid_argument -> 2, data -> 3, numeric -> 4.
enum class ErrorKind {
  invalid_argument,
  data,
  numeric,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
  throw Error(ErrorKind::invalid_argument, message);
}

[[noreturn]] inline void throw_data(const std::string& message) {
  throw Error(ErrorKind::data, message);
}

[[noreturn]] inline void throw_numeric(const std::string& message) {
  throw Error(ErrorKind::numeric, message);
}

}  // namespace hrtfup
