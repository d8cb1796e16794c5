#pragma once

#include <stdexcept>
#include <string>

namespace trp {

/// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input (formula, task file, JSON model).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    explicit ParseError(const std::string& what) : Error(what), position_(0) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A query left the time domain a timed word determines.
class OutOfHorizonError : public Error {
public:
    using Error::Error;
};

/// Structural problem in a model (bad state id, missing weight, invalid
/// probability mass, inconsistent solution, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

/// An enumeration or unrolling exceeded its configured budget.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

} // namespace trp
