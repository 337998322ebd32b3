#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modae {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed task or out-of-range reference.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (e.g. applying an inapplicable action).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A plan failed validation; `step` is the index of the first offending step
// in the order the validator processes them.
class ValidationError : public Error {
 public:
  ValidationError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace modae
