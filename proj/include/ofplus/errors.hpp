#pragma once

#include <stdexcept>
#include <string>

namespace ofplus {

/// Base of every error the engine raises. Domain errors map to CLI exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

/// F * conj(F) is not +-1.
struct NotAdmissible : DomainError {
  using DomainError::DomainError;
};

/// Star translation needs exactly one non-zero entry per row and column of F.
struct NonMonomialF : DomainError {
  using DomainError::DomainError;
};

/// A combinatorial guard (enumeration budget, word length, table size) failed.
struct BudgetExceeded : DomainError {
  using DomainError::DomainError;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace ofplus
