#pragma once

#include <stdexcept>
#include <string>

namespace qform {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input object violates its own invariants (shape, symmetry, well-definedness).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Operand shapes do not fit together.
class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A precondition of an operation does not hold. hypothesis() names it.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string hypothesis, const std::string& detail)
      : Error(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// A predicate needs the parity map v but the form carries none.
class MissingV : public HypothesisError {
 public:
  explicit MissingV(const std::string& where) : HypothesisError("v missing", where) {}
};

// A bounded search hit its node limit before finishing.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace qform
