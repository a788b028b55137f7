#pragma once

#include <stdexcept>
#include <string>

namespace ekc {

// Input outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Request exceeds a configured resource limit.
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

// Operation called for the wrong DivisorContext case.
struct DispatchError : DomainError {
  using DomainError::DomainError;
};

struct IllConditionedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ekc
