#pragma once

#include <stdexcept>
#include <string>

namespace aci {

/// Coarse classification of failures. The CLI maps these onto exit codes.
enum class ErrorKind {
  invalid_argument,  // malformed input: dimensions, non-finite entries, bad spec
  precondition,      // a theorem hypothesis does not hold for the given input
  breakdown,         // numerical breakdown during an iteration
  not_converged,     // an analysis needs a converged run and did not get one
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return "invalid_argument";
    case ErrorKind::precondition:
      return "precondition";
    case ErrorKind::breakdown:
      return "breakdown";
    case ErrorKind::not_converged:
      return "not_converged";
  }
  return "unknown";
}

}  // namespace aci
