#pragma once

#include <stdexcept>
#include <string>

namespace groupvote {

// Base for every error raised by the library. Callers that only care about
// "bad input vs. bug" can catch Error and InvariantViolation separately.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Matrix or profile has the wrong shape (distinct from a metric violation).
class DimensionError : public Error {
public:
    using Error::Error;
};

class GroupingError : public Error {
public:
    using Error::Error;
};

class ProfileError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

// Instance file could not be parsed or does not follow the schema.
// location() is a JSON-pointer-like path ("/dist/3") or a byte offset.
class FormatError : public Error {
public:
    FormatError(std::string location, const std::string& what)
        : Error(location.empty() ? what : location + ": " + what), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class MetricError : public Error {
public:
    using Error::Error;
};

// A two-alternative mechanism was handed m != 2.
class AlternativeCountError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// Something that the theory says cannot happen did happen. Always a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class NoMatchingAlternative : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

}  // namespace groupvote
