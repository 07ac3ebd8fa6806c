#pragma once

#include <stdexcept>
#include <string>

namespace sdrdu {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input failed validation. `field()` names the offending input field.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)), message_(what) {}

    const std::string& field() const noexcept { return field_; }
    /// The diagnostic without the field prefix.
    const std::string& message() const noexcept { return message_; }

private:
    std::string field_;
    std::string message_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Polynomial degree beyond the supported bound.
class UnsupportedDegreeError : public Error {
public:
    using Error::Error;
};

/// A derivative was requested at an order the function does not possess.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A rejection sampler ran out of trials.
class ExhaustionError : public Error {
public:
    using Error::Error;
};

}  // namespace sdrdu
