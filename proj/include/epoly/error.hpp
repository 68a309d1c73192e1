#pragma once

#include <stdexcept>
#include <string>

namespace epoly {

/// Raised when an argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The vertex subset is linearly dependent; no simplex height exists.
class DependentSubsetError : public PreconditionError {
 public:
  DependentSubsetError()
      : PreconditionError("vertex subset is linearly dependent") {}
};

/// A size limit (exhaustive-enumeration cap, state-vector cap, ...) was hit.
class CapExceededError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace epoly
