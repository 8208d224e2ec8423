#pragma once

#include <stdexcept>
#include <string>

namespace torus {

// Exit-code classes shared by the library and the CLI.
enum class ErrorKind : int {
  kValidation = 2,
  kCapExceeded = 3,
  kNumerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable identifier, e.g. "empty_spectrum".
  const std::string& code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
  std::string code_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string& message)
      : Error(ErrorKind::kValidation, std::move(code), message) {}
};

class CapExceeded : public Error {
 public:
  CapExceeded(std::string code, const std::string& message)
      : Error(ErrorKind::kCapExceeded, std::move(code), message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(std::string code, const std::string& message)
      : Error(ErrorKind::kNumerical, std::move(code), message) {}
};

}  // namespace torus
