#pragma once

#include <stdexcept>
#include <string>

namespace qoutlier {

// Base for all library errors. Subclasses map onto CLI exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition or invariant (exit 2).
struct ContractError : Error {
    using Error::Error;
};

struct DimensionError : ContractError {
    using ContractError::ContractError;
};

struct DomainError : ContractError {
    using ContractError::ContractError;
};

struct ResourceError : ContractError {
    using ContractError::ContractError;
};

// Conditioning removed all support mass. In the cover loop this is the
// success signal, not a failure.
struct ConditioningError : DomainError {
    using DomainError::DomainError;
};

// File / format problems (exit 4).
struct IoError : Error {
    using Error::Error;
};

} // namespace qoutlier
