#pragma once

#include <stdexcept>
#include <string>

namespace crossimpact {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input validation failures. The CLI maps these to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ParameterError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Argument outside a function's domain, e.g. a negative kernel lag.
class DomainError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class IngestError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Failures of a computation on otherwise valid input. Exit code 2.
class ComputationError : public Error {
public:
    using Error::Error;
};

class ConsistencyError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class EmptyDomainError : public ComputationError {
public:
    using ComputationError::ComputationError;
};

/// Raised by the calibration pipeline; carries the stage that failed.
class CalibrationError : public ComputationError {
public:
    CalibrationError(std::string stage, const std::string& what)
        : ComputationError(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace crossimpact
