#pragma once

#include <stdexcept>
#include <string>

namespace ygraph {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input violates a structural contract (causality, decay, shape).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation ran but failed numerically (singular system, blow-up).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ygraph
