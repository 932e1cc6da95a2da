#pragma once
#include <stdexcept>
#include <string>

namespace relmech {

// Parameter outside a path or worldline domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke an operation precondition (base-point mismatch, wrong dimension, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Non-finite values met during evaluation.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A null direction was used where a component decomposition needs a non-null one.
class DegenerateDirectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The configuration lacks something the operation needs (e.g. no metric).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// mu == 0 describes the vacuum, not a particle.
class InvalidParticleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two independent evaluations of the same quantity disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace relmech
